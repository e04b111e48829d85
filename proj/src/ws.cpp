#include "auxsim/ws.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

namespace auxsim {

std::string ws_accept_key(std::string_view client_key) {
  static constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
  std::string in(client_key);
  in += kGuid;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(in.data()), in.size(), digest);
  unsigned char out[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
  const int n = EVP_EncodeBlock(out, digest, SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<char*>(out), static_cast<std::size_t>(n));
}

std::string ws_encode(WsOpcode op, std::string_view payload,
                      std::optional<std::array<std::uint8_t, 4>> mask, bool fin) {
  std::string out;
  out.push_back(static_cast<char>((fin ? 0x80 : 0x00) | static_cast<std::uint8_t>(op)));
  const std::uint8_t mask_bit = mask ? 0x80 : 0x00;
  const std::uint64_t n = payload.size();
  if (n < 126) {
    out.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xffff) {
    out.push_back(static_cast<char>(mask_bit | 126));
    out.push_back(static_cast<char>(n >> 8));
    out.push_back(static_cast<char>(n & 0xff));
  } else {
    out.push_back(static_cast<char>(mask_bit | 127));
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((n >> shift) & 0xff));
  }
  if (!mask) {
    out.append(payload);
    return out;
  }
  for (std::uint8_t b : *mask) out.push_back(static_cast<char>(b));
  for (std::size_t i = 0; i < payload.size(); ++i) {
    out.push_back(static_cast<char>(static_cast<std::uint8_t>(payload[i]) ^ (*mask)[i % 4]));
  }
  return out;
}

std::optional<WsFrame> ws_decode(std::string_view buf, std::size_t& consumed, std::size_t max_payload) {
  if (buf.size() < 2) return std::nullopt;
  const auto b0 = static_cast<std::uint8_t>(buf[0]);
  const auto b1 = static_cast<std::uint8_t>(buf[1]);
  if (b0 & 0x70) throw WsProtocolError("reserved bits set");
  const std::uint8_t op = b0 & 0x0f;
  if (!(op <= 2 || (op >= 8 && op <= 10))) throw WsProtocolError("unknown opcode");
  WsFrame f;
  f.fin = (b0 & 0x80) != 0;
  f.op = static_cast<WsOpcode>(op);
  f.masked = (b1 & 0x80) != 0;
  std::uint64_t n = b1 & 0x7f;
  std::size_t pos = 2;
  if (n == 126) {
    if (buf.size() < 4) return std::nullopt;
    n = (static_cast<std::uint64_t>(static_cast<std::uint8_t>(buf[2])) << 8) | static_cast<std::uint8_t>(buf[3]);
    pos = 4;
  } else if (n == 127) {
    if (buf.size() < 10) return std::nullopt;
    n = 0;
    for (int i = 0; i < 8; ++i) n = (n << 8) | static_cast<std::uint8_t>(buf[2 + i]);
    pos = 10;
  }
  if (op >= 8 && (n > 125 || !f.fin)) throw WsProtocolError("bad control frame");
  if (n > max_payload) throw WsProtocolError("frame too large");
  std::array<std::uint8_t, 4> key{};
  if (f.masked) {
    if (buf.size() < pos + 4) return std::nullopt;
    for (int i = 0; i < 4; ++i) key[i] = static_cast<std::uint8_t>(buf[pos + i]);
    pos += 4;
  }
  if (buf.size() < pos + n) return std::nullopt;
  f.payload.assign(buf.substr(pos, n));
  if (f.masked) {
    for (std::size_t i = 0; i < f.payload.size(); ++i) {
      f.payload[i] = static_cast<char>(static_cast<std::uint8_t>(f.payload[i]) ^ key[i % 4]);
    }
  }
  consumed = pos + n;
  return f;
}

}  // namespace auxsim
