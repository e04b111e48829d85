#include "auxsim/protocol.hpp"

namespace auxsim {

std::string_view op_name(ServiceOp op) {
  switch (op) {
    case ServiceOp::set_chamber:
      return "set_chamber";
    case ServiceOp::start_gait:
      return "start_gait";
    case ServiceOp::turn:
      return "turn";
    case ServiceOp::reset:
      return "reset";
    case ServiceOp::load_config:
      return "load_config";
    case ServiceOp::grasp_trial:
      return "grasp_trial";
    case ServiceOp::subscribe:
      return "subscribe";
  }
  return "?";
}

std::string MessageParse::error_text() const {
  std::string out = "malformed message";
  for (std::size_t i = 0; i < errors.size(); ++i) out += (i == 0 ? ": " : "; ") + errors[i].to_string();
  return out;
}

MessageParse parse_message(const std::string& text) {
  MessageParse out;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    out.errors.push_back({"", std::string("syntax error: ") + e.what()});
    return out;
  }
  return parse_message(j);
}

MessageParse parse_message(const json& j) {
  MessageParse out;
  FieldReader r(true);
  if (!j.is_object()) {
    r.error("", "expected an object");
    out.errors = r.errors();
    return out;
  }
  ServiceMessage m;
  if (j.contains("seq")) {
    if (j.at("seq").is_structured()) {
      r.error("/seq", "expected a string or number");
    } else {
      m.seq = j.at("seq");
    }
  }
  if (auto v = r.integer(j, "", "version", true)) {
    if (*v != kScenarioVersion) r.error("/version", "unsupported version " + std::to_string(*v));
  }
  const auto type = r.string(j, "", "type", true);
  if (!type) {
    out.errors = r.errors();
    return out;
  }

  if (*type == "set_chamber") {
    m.op = ServiceOp::set_chamber;
    r.object(j, "", {"version", "type", "seq", "id", "command"});
    std::optional<int> id;
    if (j.contains("id")) {
      id = chamber_from_json(j.at("id"), r, "/id");
    } else {
      r.error("/id", "missing required field");
    }
    const auto word = r.string(j, "", "command", true);
    if (word && *word != "vacuum" && *word != "ambient") {
      r.error("/command", "expected \"vacuum\" or \"ambient\"");
    }
    if (id && word) {
      m.command = Command::set_chamber(*id, *word == "vacuum" ? ChamberCommand::vacuum : ChamberCommand::ambient);
    }
  } else if (*type == "start_gait") {
    m.op = ServiceOp::start_gait;
    r.object(j, "", {"version", "type", "seq", "pair"});
    if (!j.contains("pair")) {
      r.error("/pair", "missing required field");
    } else {
      const json& p = j.at("pair");
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
        r.error("/pair", "expected two finger indices");
      } else {
        m.command = Command::gait_step(p[0].get<int>(), p[1].get<int>());
      }
    }
  } else if (*type == "turn") {
    m.op = ServiceOp::turn;
    r.object(j, "", {"version", "type", "seq", "dir"});
    const auto dir = r.string(j, "", "dir", true);
    if (dir && *dir != "+" && *dir != "-") r.error("/dir", "expected \"+\" or \"-\"");
    if (dir) m.command = Command::turn(*dir == "-" ? -1 : 1);
  } else if (*type == "reset") {
    m.op = ServiceOp::reset;
    r.object(j, "", {"version", "type", "seq"});
  } else if (*type == "load_config") {
    m.op = ServiceOp::load_config;
    r.object(j, "", {"version", "type", "seq", "config"});
    if (!j.contains("config")) {
      r.error("/config", "missing required field");
    } else {
      m.config = config_from_json(j.at("config"), r, "/config");
    }
  } else if (*type == "grasp_trial") {
    m.op = ServiceOp::grasp_trial;
    r.object(j, "", {"version", "type", "seq", "object"});
    m.command = Command::grasp();
    if (j.contains("object")) {
      if (auto o = object_from_json(j.at("object"), r, "/object")) m.command = Command::grasp(*o);
    }
  } else if (*type == "subscribe") {
    m.op = ServiceOp::subscribe;
    r.object(j, "", {"version", "type", "seq", "rate_hz"});
    if (auto rate = r.number(j, "", "rate_hz", true)) m.rate_hz = *rate;
  } else {
    r.error("/type", "unknown message type \"" + *type + "\"");
  }

  out.errors = r.errors();
  if (out.errors.empty()) out.message = m;
  return out;
}

json message_to_json(const ServiceMessage& m) {
  json j{{"version", kScenarioVersion}, {"type", std::string(op_name(m.op))}};
  if (!m.seq.is_null()) j["seq"] = m.seq;
  const Command& c = m.command;
  switch (m.op) {
    case ServiceOp::set_chamber:
      j["id"] = chamber_name(c.chamber);
      j["command"] = c.action == ChamberCommand::vacuum ? "vacuum" : "ambient";
      break;
    case ServiceOp::start_gait:
      j["pair"] = {c.pair[0], c.pair[1]};
      break;
    case ServiceOp::turn:
      j["dir"] = c.direction > 0 ? "+" : "-";
      break;
    case ServiceOp::reset:
      break;
    case ServiceOp::load_config:
      j["config"] = config_to_json(m.config.value_or(Config{}));
      break;
    case ServiceOp::grasp_trial:
      if (c.object) j["object"] = object_to_json(*c.object);
      break;
    case ServiceOp::subscribe:
      j["rate_hz"] = m.rate_hz;
      break;
  }
  return j;
}

json ack_json(const Ack& ack) {
  json j{{"version", kScenarioVersion}, {"type", "ack"}, {"accepted", ack.accepted}, {"tick", ack.tick}};
  if (!ack.accepted) j["reason"] = ack.reason;
  if (!ack.detail.empty()) j["detail"] = ack.detail;
  if (!ack.seq.is_null()) j["seq"] = ack.seq;
  return j;
}

json error_json(const std::string& reason, const json& seq) {
  json j{{"version", kScenarioVersion}, {"type", "error"}, {"reason", reason}};
  if (!seq.is_null()) j["seq"] = seq;
  return j;
}

}  // namespace auxsim
