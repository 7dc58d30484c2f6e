#include "wlantcp/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wlantcp/errors.hpp"

namespace wlantcp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& path, const std::string& msg) {
  throw ConfigError(origin + ": " + path + ": " + msg);
}

double require_number(const json& j, const std::string& origin, const std::string& path) {
  if (!j.is_number()) fail(origin, path, "expected a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& origin, const std::string& path) {
  if (!j.is_number_integer()) fail(origin, path, "expected an integer");
  return j.get<int>();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& origin, const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) fail(origin, path + "/" + key, "unknown field");
  }
}

std::vector<double> parse_rtpd(const json& j, const std::string& origin) {
  std::vector<double> out;
  if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i)
      out.push_back(require_number(j[i], origin, "/rtpd_ms/" + std::to_string(i)) * 1e-3);
  } else if (j.is_object()) {
    check_keys(j, {"start", "stop", "step"}, origin, "/rtpd_ms");
    if (!j.contains("start") || !j.contains("stop") || !j.contains("step"))
      fail(origin, "/rtpd_ms", "range form needs start, stop and step");
    const double start = require_number(j["start"], origin, "/rtpd_ms/start");
    const double stop = require_number(j["stop"], origin, "/rtpd_ms/stop");
    const double step = require_number(j["step"], origin, "/rtpd_ms/step");
    if (step <= 0) fail(origin, "/rtpd_ms/step", "must be > 0");
    if (stop < start) fail(origin, "/rtpd_ms", "stop must be >= start");
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v * 1e-3);
  } else {
    fail(origin, "/rtpd_ms", "expected an array or {start, stop, step}");
  }
  return out;
}

void parse_phy(const json& j, PhyMacParams& p, const std::string& origin) {
  check_keys(j,
             {"slot_ms", "sifs_ms", "difs_ms", "plcp_ms", "cw_min", "cw_max", "backoff_stages",
              "control_rate_mbps", "mac_header_bytes", "rts_bytes", "cts_bytes", "mac_ack_bytes",
              "tcp_ip_header_bytes", "tcp_payload_bytes", "tcp_ack_segment_bytes"},
             origin, "/phy");
  auto num = [&](const char* key, double& dst, double unit) {
    if (j.contains(key)) dst = require_number(j[key], origin, std::string("/phy/") + key) * unit;
  };
  auto integer = [&](const char* key, int& dst) {
    if (j.contains(key)) dst = require_int(j[key], origin, std::string("/phy/") + key);
  };
  num("slot_ms", p.slot_time, 1e-3);
  num("sifs_ms", p.sifs, 1e-3);
  num("difs_ms", p.difs, 1e-3);
  num("plcp_ms", p.plcp_overhead, 1e-3);
  num("control_rate_mbps", p.control_rate, 1e6);
  integer("cw_min", p.cw_min);
  integer("cw_max", p.cw_max);
  integer("backoff_stages", p.backoff_stages);
  integer("mac_header_bytes", p.mac_header_bytes);
  integer("rts_bytes", p.rts_bytes);
  integer("cts_bytes", p.cts_bytes);
  integer("mac_ack_bytes", p.mac_ack_bytes);
  integer("tcp_ip_header_bytes", p.tcp_ip_header_bytes);
  integer("tcp_payload_bytes", p.tcp_payload_bytes);
  integer("tcp_ack_segment_bytes", p.tcp_ack_segment_bytes);
}

}  // namespace

void Scenario::validate() const {
  classes.validate();
  phy.validate();
  if (w_conn < 1) throw ConfigError("scenario: w_conn must be >= 1");
  if (rtpd.empty()) throw ConfigError("scenario: rtpd_ms must name at least one sweep point");
  for (double r : rtpd)
    if (r < 0) throw ConfigError("scenario: rtpd values must be >= 0");
  if (!(sim_duration > sim_warmup) || sim_warmup < 0)
    throw ConfigError("scenario: require sim duration > warmup >= 0");
  if (seeds.empty()) throw ConfigError("scenario: need at least one seed");
  if (n_max < 1) throw ConfigError("scenario: n_max must be >= 1");
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.is_object()) fail(origin, "/", "top level must be an object");
  check_keys(root, {"classes", "w_conn", "rtpd_ms", "phy", "sim", "solver"}, origin, "");

  Scenario sc;

  if (!root.contains("classes") || !root["classes"].is_array() || root["classes"].empty())
    fail(origin, "/classes", "expected a non-empty array");
  std::vector<RateClass> classes;
  for (size_t i = 0; i < root["classes"].size(); ++i) {
    const auto& jc = root["classes"][i];
    const std::string path = "/classes/" + std::to_string(i);
    if (!jc.is_object()) fail(origin, path, "expected an object");
    check_keys(jc, {"rate_mbps", "count", "hol_probability"}, origin, path);
    if (!jc.contains("rate_mbps")) fail(origin, path + "/rate_mbps", "required");
    if (!jc.contains("count")) fail(origin, path + "/count", "required");
    RateClass c;
    c.rate_bps = require_number(jc["rate_mbps"], origin, path + "/rate_mbps") * 1e6;
    c.count = require_int(jc["count"], origin, path + "/count");
    if (jc.contains("hol_probability"))
      c.hol_probability = require_number(jc["hol_probability"], origin, path + "/hol_probability");
    classes.push_back(c);
  }
  try {
    sc.classes = make_rate_classes(std::move(classes));
  } catch (const ConfigError& e) {
    fail(origin, "/classes", e.what());
  }

  if (!root.contains("w_conn")) fail(origin, "/w_conn", "required");
  sc.w_conn = require_int(root["w_conn"], origin, "/w_conn");

  if (!root.contains("rtpd_ms")) fail(origin, "/rtpd_ms", "required");
  sc.rtpd = parse_rtpd(root["rtpd_ms"], origin);
  std::sort(sc.rtpd.begin(), sc.rtpd.end());

  if (root.contains("phy")) {
    if (!root["phy"].is_object()) fail(origin, "/phy", "expected an object");
    parse_phy(root["phy"], sc.phy, origin);
  }

  if (root.contains("sim")) {
    const auto& js = root["sim"];
    if (!js.is_object()) fail(origin, "/sim", "expected an object");
    check_keys(js, {"duration_ms", "warmup_ms", "seeds", "enabled"}, origin, "/sim");
    if (js.contains("duration_ms"))
      sc.sim_duration = require_number(js["duration_ms"], origin, "/sim/duration_ms") * 1e-3;
    if (js.contains("warmup_ms"))
      sc.sim_warmup = require_number(js["warmup_ms"], origin, "/sim/warmup_ms") * 1e-3;
    if (js.contains("enabled")) {
      if (!js["enabled"].is_boolean()) fail(origin, "/sim/enabled", "expected a boolean");
      sc.sim_enabled = js["enabled"].get<bool>();
    }
    if (js.contains("seeds")) {
      if (!js["seeds"].is_array() || js["seeds"].empty())
        fail(origin, "/sim/seeds", "expected a non-empty array");
      for (size_t i = 0; i < js["seeds"].size(); ++i) {
        const auto& v = js["seeds"][i];
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
          fail(origin, "/sim/seeds/" + std::to_string(i), "expected a nonnegative integer");
        sc.seeds.push_back(v.get<std::uint64_t>());
      }
    }
  }
  if (sc.seeds.empty()) {
    sc.seeds.resize(30);
    std::iota(sc.seeds.begin(), sc.seeds.end(), 1);
  }

  if (root.contains("solver")) {
    const auto& js = root["solver"];
    if (!js.is_object()) fail(origin, "/solver", "expected an object");
    check_keys(js, {"n_max", "mode"}, origin, "/solver");
    if (js.contains("n_max")) sc.n_max = require_int(js["n_max"], origin, "/solver/n_max");
    if (js.contains("mode")) {
      if (!js["mode"].is_string()) fail(origin, "/solver/mode", "expected \"exact\" or \"approx\"");
      const std::string mode = js["mode"].get<std::string>();
      if (mode == "approx") sc.approx_mva = true;
      else if (mode != "exact") fail(origin, "/solver/mode", "expected \"exact\" or \"approx\"");
    }
  }

  try {
    sc.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open scenario file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), file.filename().string());
}

}  // namespace wlantcp
