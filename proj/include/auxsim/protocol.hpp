#pragma once

// Messages between operator clients and a live session. Every message is a
// JSON object with "version" and "type"; "seq" is an optional client tag
// echoed back in the ack.
//
//   set_chamber  {id: "f0.c1" | 0..11, command: "vacuum" | "ambient"}
//   start_gait   {pair: [a, b]}
//   turn         {dir: "+" | "-"}
//   reset        {}
//   load_config  {config: {...}}   same block as a scenario file
//   grasp_trial  {object?: {...}}
//   subscribe    {rate_hz}          snapshot rate for this connection

#include "auxsim/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace auxsim {

enum class ServiceOp { set_chamber, start_gait, turn, reset, load_config, grasp_trial, subscribe };

std::string_view op_name(ServiceOp op);

struct ServiceMessage {
  ServiceOp op = ServiceOp::reset;
  Command command;               // sim commands
  std::optional<Config> config;  // load_config
  double rate_hz = 0.0;          // subscribe
  json seq;                      // null when absent

  friend bool operator==(const ServiceMessage&, const ServiceMessage&) = default;
};

struct MessageParse {
  std::optional<ServiceMessage> message;
  std::vector<ParseIssue> errors;

  std::string error_text() const;
};

MessageParse parse_message(const std::string& text);
MessageParse parse_message(const json& j);
json message_to_json(const ServiceMessage& m);

struct Ack {
  bool accepted = false;
  std::int64_t tick = 0;  // session tick at which the command applied
  std::string reason;     // rejection reason, verbatim from the simulator
  std::string detail;     // grasp verdict, when there is one
  json seq;
};

json ack_json(const Ack& ack);
json error_json(const std::string& reason, const json& seq = nullptr);

}  // namespace auxsim
