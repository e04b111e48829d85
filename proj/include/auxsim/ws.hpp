#pragma once

// RFC 6455 framing, enough for JSON text messages: handshake key, frame
// encode and incremental decode. Used by the server and by test clients.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace auxsim {

enum class WsOpcode : std::uint8_t { continuation = 0, text = 1, binary = 2, close = 8, ping = 9, pong = 10 };

struct WsProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ws_accept_key(std::string_view client_key);

// Clients must mask, servers must not.
std::string ws_encode(WsOpcode op, std::string_view payload,
                      std::optional<std::array<std::uint8_t, 4>> mask = std::nullopt, bool fin = true);

struct WsFrame {
  bool fin = true;
  WsOpcode op = WsOpcode::text;
  bool masked = false;
  std::string payload;  // unmasked
};

// Decodes one frame from the front of buf. Returns nothing while the frame
// is incomplete; on success sets consumed to its length. Throws
// WsProtocolError for reserved bits, bad opcodes or oversized payloads.
std::optional<WsFrame> ws_decode(std::string_view buf, std::size_t& consumed,
                                 std::size_t max_payload = 1 << 20);

}  // namespace auxsim
