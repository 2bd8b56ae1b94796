#include "hybridbeam/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace hybridbeam {

namespace {

class Reader {
 public:
  Reader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (present() && !node_.IsMap()) fail("", "expected a mapping");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(fmt::format("{}: {}", field(key), what));
  }

  std::string field(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  bool present() const { return node_.IsDefined() && !node_.IsNull(); }
  bool has(const std::string& key) const { return present() && node_[key]; }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const YAML::Node v = node_[key];
    if (!v.IsScalar()) fail(key, "expected a scalar");
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      fail(key, fmt::format("cannot parse '{}'", v.Scalar()));
    }
  }

  template <typename T>
  void read_list(const std::string& key, std::vector<T>& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const YAML::Node v = node_[key];
    std::vector<T> values;
    auto one = [&](const YAML::Node& item) {
      try {
        values.push_back(item.as<T>());
      } catch (const YAML::Exception&) {
        fail(key, fmt::format("cannot parse list entry '{}'", item.IsScalar() ? item.Scalar() : "<node>"));
      }
    };
    if (v.IsSequence()) {
      for (const auto& item : v) one(item);
    } else if (v.IsScalar()) {
      one(v);
    } else {
      fail(key, "expected a list");
    }
    out = std::move(values);
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    return Reader(has(key) ? node_[key] : YAML::Node(), field(key));
  }

  /// Rejects keys that were never read, which catches typos.
  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      const std::string k = kv.first.as<std::string>();
      if (!seen_.count(k)) fail(k, "unknown field");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

ExperimentConfig from_yaml(const YAML::Node& root) {
  if (!root || root.IsNull()) throw ConfigError("<root>: empty config");
  ExperimentConfig cfg;
  Reader r(root, "");
  if (!r.has("schema_version")) r.fail("schema_version", "missing");
  r.read("schema_version", cfg.schema_version);
  if (cfg.schema_version != kSchemaVersion)
    r.fail("schema_version", fmt::format("unsupported version {} (expected {})", cfg.schema_version, kSchemaVersion));
  r.read("name", cfg.name);
  r.read("trials", cfg.trials);
  r.read("seed", cfg.base_seed);
  r.read("threads", cfg.threads);

  Reader sys = r.child("system");
  sys.read("nt", cfg.system.nt);
  sys.read("nr", cfg.system.nr);
  sys.read("lt", cfg.system.lt);
  sys.read("lr", cfg.system.lr);
  sys.read("ns", cfg.system.ns);
  sys.finish();

  Reader chan = r.child("channel");
  chan.read("clusters", cfg.clusters.num_clusters);
  chan.read("rays", cfg.clusters.rays_per_cluster);
  chan.read_list("cluster_power", cfg.clusters.cluster_power);
  chan.read("angular_spread", cfg.clusters.angular_spread);
  chan.read("element_spacing", cfg.element_spacing);
  chan.finish();

  Reader bits = r.child("bits");
  int lo = cfg.admm.range.min_bits, hi = cfg.admm.range.max_bits;
  bits.read("min", lo);
  bits.read("max", hi);
  if (lo < 1 || hi < lo) bits.fail("", fmt::format("need 1 <= min <= max, got [{}, {}]", lo, hi));
  cfg.admm.range = BitRange{lo, hi};
  bits.finish();

  Reader pw = r.child("power");
  pw.read("p_dac", cfg.power.p_dac);
  pw.read("p_adc", cfg.power.p_adc);
  pw.read("p_ct", cfg.power.p_ct);
  pw.read("p_cr", cfg.power.p_cr);
  pw.read("p_pt", cfg.power.p_pt);
  pw.read("p_pr", cfg.power.p_pr);
  pw.read("p_t", cfg.power.p_t);
  pw.read("p_r", cfg.power.p_r);
  pw.finish();

  Reader ad = r.child("admm");
  ad.read("alpha", cfg.admm.alpha);
  ad.read("max_iters", cfg.admm.max_iters);
  ad.read("tol_rel", cfg.admm.tol_rel);
  ad.read("early_stop", cfg.admm.early_stop);
  ad.read("box_tol", cfg.admm.box.tol);
  ad.read("box_max_iters", cfg.admm.box.max_iters);
  ad.finish();

  Reader sw = r.child("sweep");
  std::string mode = "product";
  sw.read("mode", mode);
  if (mode == "product") cfg.sweep.mode = SweepMode::kProduct;
  else if (mode == "zip") cfg.sweep.mode = SweepMode::kZip;
  else sw.fail("mode", fmt::format("expected 'product' or 'zip', got '{}'", mode));
  sw.read_list("snr_db", cfg.sweep.snr_db);
  sw.read_list("gamma_t", cfg.sweep.gamma_t);
  sw.read_list("gamma_r", cfg.sweep.gamma_r);
  sw.read_list("nt", cfg.sweep.nt);
  sw.read_list("nr", cfg.sweep.nr);
  sw.read_list("lt", cfg.sweep.lt);
  sw.read_list("lr", cfg.sweep.lr);
  sw.read_list("ns", cfg.sweep.ns);
  sw.finish();

  std::vector<std::string> names;
  if (r.has("schemes")) {
    r.read_list("schemes", names);
    cfg.schemes.clear();
    for (const std::string& n : names) {
      const auto s = parse_scheme(n);
      if (!s) r.fail("schemes", fmt::format("unknown scheme '{}'", n));
      cfg.schemes.push_back(*s);
    }
  } else {
    r.read_list("schemes", names);
  }

  Reader bf = r.child("bruteforce");
  bf.read("design_iters", cfg.bruteforce.design_iters);
  bf.read("max_combos", cfg.bruteforce.max_combos);
  bf.finish();
  r.finish();

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("<root>: malformed config: {}", e.what()));
  }
  return from_yaml(root);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hybridbeam
