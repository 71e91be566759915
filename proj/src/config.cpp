#include "cidan/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cidan/errors.hpp"

namespace cidan {

using json = nlohmann::ordered_json;

void HostCostModel::validate() const {
  if (ns_per_host_byte < 0 || ns_per_popcount < 0 || ns_per_division < 0)
    throw std::invalid_argument("HostCostModel: costs must be non-negative");
}

void ExperimentConfig::validate() const {
  geometry.validate();
  timing.validate();
  energy.validate();
  host_cost.validate();
  aes_host_cost.validate();
}

namespace {

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_geometry(const json& j, DramGeometry& g) {
  read_field(j, "banks_per_chip", g.banks_per_chip);
  read_field(j, "rows_per_bank", g.rows_per_bank);
  read_field(j, "cols_per_row", g.cols_per_row);
  read_field(j, "bits_per_col", g.bits_per_col);
  read_field(j, "bank_group_size", g.bank_group_size);
}

void read_timing(const json& j, TimingParams& t) {
  read_field(j, "t_rcd", t.t_rcd);
  read_field(j, "t_ras", t.t_ras);
  read_field(j, "t_rp", t.t_rp);
  read_field(j, "t_rc", t.t_rc);
  read_field(j, "t_rrd", t.t_rrd);
  read_field(j, "t_faw", t.t_faw);
  read_field(j, "t_ck", t.t_ck);
  read_field(j, "t_wr", t.t_wr);
  read_field(j, "t_writeback_extra", t.t_writeback_extra);
}

void read_energy(const json& j, EnergyParams& e) {
  read_field(j, "e_act_pre", e.e_act_pre);
  read_field(j, "e_rd", e.e_rd);
  read_field(j, "e_wr", e.e_wr);
  read_field(j, "e_tlpe_cycle", e.e_tlpe_cycle);
  read_field(j, "p_background", e.p_background);
}

void read_host(const json& j, HostCostModel& h) {
  read_field(j, "ns_per_host_byte", h.ns_per_host_byte);
  read_field(j, "ns_per_popcount", h.ns_per_popcount);
  read_field(j, "ns_per_division", h.ns_per_division);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  ExperimentConfig cfg;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < json_text.size(); ++i)
      if (json_text[i] == '\n') ++line;
    throw ParseError("config line " + std::to_string(line) + ": " + e.what(), line);
  }
  if (j.contains("geometry")) read_geometry(j.at("geometry"), cfg.geometry);
  if (j.contains("timing")) read_timing(j.at("timing"), cfg.timing);
  if (j.contains("energy")) read_energy(j.at("energy"), cfg.energy);
  if (j.contains("host_cost")) read_host(j.at("host_cost"), cfg.host_cost);
  if (j.contains("aes_host_cost")) read_host(j.at("aes_host_cost"), cfg.aes_host_cost);
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["geometry"] = {{"banks_per_chip", cfg.geometry.banks_per_chip},
                   {"rows_per_bank", cfg.geometry.rows_per_bank},
                   {"cols_per_row", cfg.geometry.cols_per_row},
                   {"bits_per_col", cfg.geometry.bits_per_col},
                   {"bank_group_size", cfg.geometry.bank_group_size}};
  j["timing"] = {{"t_rcd", cfg.timing.t_rcd},
                 {"t_ras", cfg.timing.t_ras},
                 {"t_rp", cfg.timing.t_rp},
                 {"t_rc", cfg.timing.t_rc},
                 {"t_rrd", cfg.timing.t_rrd},
                 {"t_faw", cfg.timing.t_faw},
                 {"t_ck", cfg.timing.t_ck},
                 {"t_wr", cfg.timing.t_wr},
                 {"t_writeback_extra", cfg.timing.t_writeback_extra}};
  j["energy"] = {{"e_act_pre", cfg.energy.e_act_pre},
                 {"e_rd", cfg.energy.e_rd},
                 {"e_wr", cfg.energy.e_wr},
                 {"e_tlpe_cycle", cfg.energy.e_tlpe_cycle},
                 {"p_background", cfg.energy.p_background}};
  j["host_cost"] = {{"ns_per_host_byte", cfg.host_cost.ns_per_host_byte},
                    {"ns_per_popcount", cfg.host_cost.ns_per_popcount},
                    {"ns_per_division", cfg.host_cost.ns_per_division}};
  j["aes_host_cost"] = {{"ns_per_host_byte", cfg.aes_host_cost.ns_per_host_byte},
                        {"ns_per_popcount", cfg.aes_host_cost.ns_per_popcount},
                        {"ns_per_division", cfg.aes_host_cost.ns_per_division}};
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = config_to_json(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace cidan
