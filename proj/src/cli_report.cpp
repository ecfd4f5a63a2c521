#include "scatter/cli_report.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "scatter/delsarte_dual.hpp"
#include "scatter/pg_saturate.hpp"
#include "scatter/rank_code.hpp"
#include "scatter/rng.hpp"
#include "scatter/scatter_core.hpp"
#include "scatter/subspace_io.hpp"

namespace scatter {
namespace {

using nlohmann::json;

template <class T>
T parse_int(std::string_view key, std::string_view v, int base = 10) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out, base);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("invalid value '" + std::string(v) + "' for " + std::string(key));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string hex64(std::uint64_t x) {
  std::ostringstream o;
  o << std::hex << x;
  return o.str();
}

class Context {
 public:
  explicit Context(const RunConfig& cfg) : cfg_(cfg) {
    f_ = cfg.degree || cfg.modulus
             ? Field::make(cfg.degree.value_or(6 * cfg.h), cfg.modulus.value_or(Field::default_modulus(6 * cfg.h)), cfg.h)
             : Field::tower(cfg.h);
    opt_.workers = cfg.workers;
    opt_.budget = cfg.budget;
  }

  const FieldPtr& field() const { return f_; }
  const Field& f() const { return *f_; }
  const ScanOptions& opt() const { return opt_; }
  const RunConfig& cfg() const { return cfg_; }
  Sampling sampling(std::uint64_t salt = 0) const { return Sampling{cfg_.samples, *cfg_.seed + salt}; }

  void progress(const std::string& msg) const {
    if (cfg_.progress) std::cerr << "[scatter] " << msg << '\n';
  }

  /// U_s, or the subspace from the input file.
  std::pair<std::string, FqSubspace> subspace() const {
    if (cfg_.input.empty()) return {"U_" + std::to_string(cfg_.s), build_Us(f_, cfg_.s)};
    std::ifstream in(cfg_.input);
    if (!in) throw ConfigError("cannot read input file " + cfg_.input);
    std::stringstream text;
    text << in.rdbuf();
    const RowsFile rf = parse_rows(*f_, text.str());
    return {"input", FqSubspace::span(f_, rf.r, rf.rows)};
  }

  json rows(int r, const std::vector<Vec>& v) const { return format_rows(*f_, r, v); }
  json subspace_json(const std::string& name, const FqSubspace& u) const {
    return {{"name", name}, {"dim", u.dim()}, {"ambient", u.ambient()}, {"rows", rows(u.ambient(), u.basis())}};
  }

 private:
  const RunConfig& cfg_;
  FieldPtr f_;
  ScanOptions opt_;
};

json field_json(const Field& f) {
  return {{"degree", f.degree()}, {"modulus_hex", hex64(f.modulus())}, {"h", f.h_exp()}, {"q", f.q()}, {"m", f.m()}};
}

json config_json(const RunConfig& c) {
  json j{{"s", c.s},         {"order", c.order}, {"rho", c.rho},   {"codim", c.codim},
         {"family", c.family}, {"mode", to_string(c.mode)}, {"budget", c.budget}};
  if (c.mode == Mode::sampled) {
    j["samples"] = c.samples;
    j["seed"] = *c.seed;
    j["tries"] = c.tries;
  }
  if (!c.input.empty()) j["input"] = c.input;
  if (!c.coeffs.empty()) j["coeffs"] = c.coeffs;
  return j;
}

json histogram_json(const std::map<int, std::uint64_t>& h) {
  json j = json::object();
  for (const auto& [k, v] : h) j[std::to_string(k)] = v;
  return j;
}

// ---------------------------------------------------------------- commands

bool cmd_verify_scattered(const Context& ctx, json& res) {
  const auto [name, u] = ctx.subspace();
  const int order = ctx.cfg().order;
  res["subspace"] = ctx.subspace_json(name, u);
  const DimBound b = max_dim_bound(u.ambient(), ctx.f().m(), order);
  res["dim_bound"] = {{"value", b.value}, {"exact", b.exact}};
  const int r = u.ambient();
  bool ok = true;
  if (ctx.cfg().mode == Mode::sampled) {
    ctx.progress("sampled fast test");
    const Verdict fast = is_h_scattered_fast_sampled(u, order, ctx.sampling());
    ctx.progress("sampled oracle test");
    const Verdict oracle = is_h_scattered_oracle_sampled(u, order, ctx.sampling(1));
    res["fast"] = json::array({verdict_json(ctx.f(), r, fast)});
    res["fast"][0]["order"] = order;
    res["oracle"] = verdict_json(ctx.f(), r, oracle);
    res["oracle"]["order"] = order;
    return fast.ok && oracle.ok;
  }
  res["fast"] = json::array();
  bool fast_ok = true;
  for (int o = order; o >= 1; --o) {
    ctx.progress("fast test, order " + std::to_string(o));
    const Verdict v = is_h_scattered_fast(u, o, ctx.opt());
    json j = verdict_json(ctx.f(), r, v);
    j["order"] = o;
    res["fast"].push_back(j);
    if (o == order) fast_ok = v.ok;
    ok = ok && v.ok;
  }
  const std::uint64_t lines = order < r ? gaussian_binomial(r, order, ctx.f().size()) : 1;
  if (lines <= ctx.opt().budget) {
    ctx.progress("oracle cross-check over " + std::to_string(lines) + " subspaces");
    const Verdict oracle = is_h_scattered_oracle(u, order, ctx.opt());
    res["oracle"] = verdict_json(ctx.f(), r, oracle);
    res["oracle"]["order"] = order;
    res["agree"] = oracle.ok == fast_ok;
    ok = ok && oracle.ok && oracle.ok == fast_ok;
  } else {
    res["oracle"] = {{"skipped", "work estimate " + std::to_string(lines) + " exceeds the budget"}};
  }
  res["maximum"] = ok && b.exact && u.dim() == b.value;
  return ok;
}

bool cmd_spectrum(const Context& ctx, json& res) {
  const auto [name, u] = ctx.subspace();
  const Family fam = ctx.cfg().family == "fixed" ? Family::frobenius_fixed : Family::all;
  res["subspace"] = ctx.subspace_json(name, u);
  ctx.progress("weight spectrum, codim " + std::to_string(ctx.cfg().codim));
  const Spectrum s = ctx.cfg().mode == Mode::sampled ? weight_spectrum_sampled(u, ctx.cfg().codim, fam, ctx.sampling())
                                                     : weight_spectrum(u, ctx.cfg().codim, fam, ctx.opt());
  res["codim"] = ctx.cfg().codim;
  res["subspace_dim"] = s.subspace_dim;
  res["family"] = ctx.cfg().family;
  res["mode"] = to_string(s.mode);
  res["count"] = s.count;
  res["histogram"] = histogram_json(s.histogram);
  res["max_weight"] = s.histogram.empty() ? 0 : s.histogram.rbegin()->first;
  if (fam == Family::frobenius_fixed) {
    bool even = true;
    for (const auto& [w, n] : s.histogram) even = even && w % 2 == 0;
    res["all_even"] = even;
    return even;
  }
  return true;
}

json system_json(const Field& f, const SemilinearSystem& sys) {
  return {{"a", f.to_hex(sys.a)},         {"b", f.to_hex(sys.b)},         {"c", f.to_hex(sys.c)},
          {"d", f.to_hex(sys.d)},         {"alpha", f.to_hex(sys.alpha)}, {"beta", f.to_hex(sys.beta)},
          {"gamma", f.to_hex(sys.gamma)}, {"case", to_string(sys.bucket)}, {"kernel_dim", sys.kernel_dim},
          {"count", count_solutions(sys)}};
}

bool cmd_system_count(const Context& ctx, json& res) {
  const FqSubspace u = build_Us(ctx.field(), 1);
  const std::uint64_t bound = ctx.f().q() * ctx.f().q();
  res["bound"] = bound;
  if (!ctx.cfg().coeffs.empty()) {
    std::vector<Elem> c;
    std::string_view rest = ctx.cfg().coeffs;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      c.push_back(ctx.f().from_hex(trim(rest.substr(0, comma))));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (c.size() != 4) throw ConfigError("coeffs: expected four comma-separated hex elements");
    const SemilinearSystem sys = semilinear_system(ctx.field(), c[0], c[1], c[2], c[3]);
    const int w = weight(u, system_subspace(sys));
    res["system"] = system_json(ctx.f(), sys);
    res["system"]["weight"] = w;
    return w == sys.kernel_dim && count_solutions(sys) <= bound;
  }
  ctx.progress("random systems");
  Rng rng(*ctx.cfg().seed);
  const Elem mask = ctx.f().size() - 1;
  std::map<std::string, std::uint64_t> buckets;
  for (int b = 0; b <= static_cast<int>(SystemCase::both_nonzero); ++b) {
    buckets[std::string(to_string(static_cast<SystemCase>(b)))] = 0;
  }
  std::map<int, std::uint64_t> counts;
  std::uint64_t disagreements = 0, max_count = 0;
  json first_bad;
  for (std::uint64_t i = 0; i < ctx.cfg().samples; ++i) {
    Elem a[4];
    for (auto& x : a) x = rng() & mask;
    const SemilinearSystem sys = semilinear_system(ctx.field(), a[0], a[1], a[2], a[3]);
    ++buckets[std::string(to_string(sys.bucket))];
    ++counts[static_cast<int>(count_solutions(sys))];
    max_count = std::max(max_count, count_solutions(sys));
    const int w = weight(u, system_subspace(sys));
    if (w != sys.kernel_dim || count_solutions(sys) > bound) {
      if (!disagreements++) {
        first_bad = system_json(ctx.f(), sys);
        first_bad["weight"] = w;
      }
    }
  }
  res["samples"] = ctx.cfg().samples;
  res["buckets"] = buckets;
  res["count_histogram"] = histogram_json(counts);
  res["max_count"] = max_count;
  res["violations"] = disagreements;
  if (disagreements) res["witness"] = first_bad;
  return disagreements == 0;
}

bool cmd_verify_dual(const Context& ctx, json& res) {
  const FieldPtr& f = ctx.field();
  ctx.progress("building the dual scene");
  const DelsarteScene scene = build_scene(f);
  res["scene_invariants"] = true;
  const FqSubspace primal = primal_from_scene(scene);
  const FqSubspace dual = dual_from_scene(scene);
  res["primal_closed_form"] = true;
  res["dual_closed_forms"] = true;
  res["dual"] = ctx.subspace_json("dual", dual);
  const Verdict eq = verify_dual_equivalence(f);
  res["equivalence"] = verdict_json(*f, 4, eq);
  res["equivalence"]["matrix"] = format_matrix_text(*f, dual_equivalence_matrix());
  const MatrixFqm dp = mat_mul(*f, dual_equivalence_matrix().transpose(), dual_coordinate_permutation());
  const bool maps = apply_gl(dp, build_Us(f, 1)) == dual;
  res["maps_u1_onto_dual"] = maps;
  ctx.progress("dual scatteredness");
  const Verdict sc = is_h_scattered_fast(dual, 2, ctx.opt());
  res["dual_scattered"] = verdict_json(*f, 4, sc);
  return eq.ok && maps && sc.ok;
}

json profile_json(const WeightProfile& p) {
  return {{"n", p.n},           {"k", p.k},           {"m", p.m},
          {"d", p.d},           {"d_rho", p.d_rho},   {"singleton_ok", p.singleton_ok},
          {"is_mrd", p.is_mrd}, {"rho_mrd", p.rho_mrd}, {"near_mrd", p.near_mrd},
          {"mode", to_string(p.mode)}};
}

bool cmd_code_profile(const Context& ctx, json& res) {
  const auto [name, u] = ctx.subspace();
  res["subspace"] = ctx.subspace_json(name, u);
  const RankCode c = code_from_system(u);
  if (ctx.cfg().mode == Mode::sampled) {
    ctx.progress("sampled generalized weights");
    res["profile"] = profile_json(code_profile_sampled(c, ctx.sampling()));
    res["note"] = "sampled d_rho are upper bounds, not certified values";
    return true;
  }
  ctx.progress("generalized weights");
  const WeightProfile p = code_profile(c, ctx.opt());
  res["profile"] = profile_json(p);
  ctx.progress("codeword scan");
  const CodewordScan cs = codeword_scan(c, ctx.opt());
  res["codeword_scan"] = {{"d", cs.d}, {"checked", cs.checked}, {"distribution", histogram_json(cs.distribution)}};
  res["d_agree"] = cs.d == p.d;
  return cs.d == p.d && p.singleton_ok;
}

bool cmd_saturating(const Context& ctx, json& res) {
  const auto [name, u] = ctx.subspace();
  res["subspace"] = ctx.subspace_json(name, u);
  ctx.progress("saturation, rho " + std::to_string(ctx.cfg().rho));
  const SaturationResult s = ctx.cfg().mode == Mode::sampled
                                 ? is_rho_saturating_sampled(u, ctx.cfg().rho, ctx.sampling(), ctx.cfg().tries, ctx.opt())
                                 : is_rho_saturating(u, ctx.cfg().rho, ctx.opt());
  res["rho"] = s.rho;
  if (ctx.cfg().mode != Mode::sampled) {
    res["set_size"] = s.set_size;
    res["ambient_points"] = s.ambient_points;
    res["subsets"] = s.subsets;
    res["distinct_hyperplanes"] = s.distinct_planes;
  }
  res["verdict"] = verdict_json(ctx.f(), u.ambient(), s.verdict);
  return s.verdict.ok;
}

bool cmd_equivalence(const Context& ctx, json& res) {
  const FieldPtr& f = ctx.field();
  const FqSubspace u1 = build_Us(f, 1);
  const FqSubspace u5p = build_U5prime(f);
  const MatrixFqm m = u5prime_to_u1_matrix();
  const bool maps = apply_gl(m.transpose(), u5p) == u1;
  res["matrix"] = format_matrix_text(*f, m);
  res["maps_u5prime_onto_u1"] = maps;
  res["forms_distinct"] = !(u5p == u1);
  ctx.progress("scatteredness of U_5");
  const Verdict v5 = is_h_scattered_fast(build_Us(f, 5), 2, ctx.opt());
  res["u5_scattered"] = verdict_json(*f, 4, v5);
  return maps && v5.ok;
}

bool cmd_field_selftest(const Context& ctx, json& res) {
  const Field& f = ctx.f();
  const auto& t = f.trace_kernel_basis();
  bool kernel_ok = t.size() == 4 && f.rel_trace(1, 2) != 0;
  for (Elem x : t) kernel_ok = kernel_ok && f.rel_trace(x, 2) == 0;
  const bool moore = *row_reduce(f, moore_matrix(f, t)).det != 0;
  Rng rng(ctx.cfg().seed.value_or(0));
  const Elem mask = f.size() - 1;
  std::uint64_t failures = 0;
  const std::uint64_t checks = 1000;
  for (std::uint64_t i = 0; i < checks; ++i) {
    const Elem a = rng() & mask, b = rng() & mask, c = rng() & mask;
    bool good = f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)) && f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c)) &&
                f.frob_q(a, f.m()) == a && f.frob_q(f.mul(a, b), 1) == f.mul(f.frob_q(a, 1), f.frob_q(b, 1)) &&
                f.mul(a, b) == f.slow_mul(a, b);
    if (a) good = good && f.mul(a, f.inv(a)) == 1;
    failures += !good;
  }
  res["irreducible"] = Field::is_irreducible(f.modulus());
  res["trace_kernel_dim"] = t.size();
  res["trace_kernel_ok"] = kernel_ok;
  res["moore_nonzero"] = moore;
  res["random_checks"] = checks;
  res["random_failures"] = failures;
  return kernel_ok && moore && failures == 0;
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "command") cfg.command = value;
  else if (key == "h") cfg.h = parse_int<int>(key, value);
  else if (key == "degree") cfg.degree = parse_int<int>(key, value);
  else if (key == "modulus_hex") {
    if (value.starts_with("0x") || value.starts_with("0X")) value.remove_prefix(2);
    cfg.modulus = parse_int<std::uint64_t>(key, value, 16);
  } else if (key == "s") cfg.s = parse_int<int>(key, value);
  else if (key == "order") cfg.order = parse_int<int>(key, value);
  else if (key == "rho") cfg.rho = parse_int<int>(key, value);
  else if (key == "codim") cfg.codim = parse_int<int>(key, value);
  else if (key == "family") {
    if (value != "all" && value != "fixed") throw ConfigError("family must be all or fixed");
    cfg.family = value;
  } else if (key == "mode") {
    if (value == "exhaustive") cfg.mode = Mode::exhaustive;
    else if (value == "sampled") cfg.mode = Mode::sampled;
    else throw ConfigError("mode must be exhaustive or sampled");
  } else if (key == "samples") cfg.samples = parse_int<std::uint64_t>(key, value);
  else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "tries") cfg.tries = parse_int<int>(key, value);
  else if (key == "workers") cfg.workers = parse_int<int>(key, value);
  else if (key == "budget") {
    // Accepts integers and forms such as 1e8.
    double d = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
    if (ec != std::errc() || p != value.data() + value.size() || d < 1) throw ConfigError("invalid budget");
    cfg.budget = static_cast<std::uint64_t>(d);
  } else if (key == "input") cfg.input = value;
  else if (key == "coeffs") cfg.coeffs = value;
  else if (key == "out") cfg.out = value;
  else throw ConfigError("unknown key '" + std::string(key) + "'");
}

RunConfig parse_config_text(std::string_view text, RunConfig base) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    try {
      apply_setting(base, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + " (" + std::string(key) + "): " + e.what());
    }
  }
  return base;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), std::move(base));
}

void validate(const RunConfig& cfg) {
  if (cfg.h < 1 || cfg.h % 2 == 0) throw ConfigError("h must be a positive odd integer");
  if (cfg.s != 1 && cfg.s != 5) throw ConfigError("s must be 1 or 5");
  if (cfg.order < 1) throw ConfigError("order must be >= 1");
  if (cfg.rho < 0 || cfg.rho > 3) throw ConfigError("rho must be in [0, 3]");
  if (cfg.workers < 1 || cfg.workers > 256) throw ConfigError("workers must be in [1, 256]");
  if (cfg.tries < 1) throw ConfigError("tries must be >= 1");
  if (cfg.mode == Mode::sampled && !cfg.seed) throw ConfigError("sampled mode requires a seed");
  if (cfg.command == "system-count" && cfg.coeffs.empty() && !cfg.seed) {
    throw ConfigError("system-count over random coefficients requires a seed");
  }
}

nlohmann::json verdict_json(const Field& f, int r, const Verdict& v) {
  json j{{"ok", v.ok},
         {"mode", to_string(v.mode)},
         {"checked_count", v.checked_count},
         {"degenerate", v.degenerate},
         {"applicable", v.applicable}};
  if (!v.note.empty()) j["note"] = v.note;
  if (v.witness) {
    j["witness"] = {{"kind", v.witness->kind}, {"value", v.witness->value}, {"basis", format_rows(f, r, v.witness->basis)}};
  }
  return j;
}

nlohmann::json strip_runtime(nlohmann::json cert) {
  cert.erase("runtime");
  return cert;
}

RunResult run(const RunConfig& cfg) {
  using Handler = bool (*)(const Context&, json&);
  static const std::map<std::string, Handler> handlers{
      {"verify-scattered", cmd_verify_scattered}, {"spectrum", cmd_spectrum},
      {"system-count", cmd_system_count},         {"verify-dual", cmd_verify_dual},
      {"code-profile", cmd_code_profile},         {"saturating", cmd_saturating},
      {"equivalence", cmd_equivalence},           {"field-selftest", cmd_field_selftest},
  };
  const auto start = std::chrono::steady_clock::now();
  RunResult out;
  json& cert = out.certificate;
  cert["schema"] = kSchemaVersion;
  cert["tool"] = {{"name", "scatter"}, {"version", kToolVersion}};
  cert["command"] = cfg.command;
  try {
    const auto it = handlers.find(cfg.command);
    if (it == handlers.end()) throw ConfigError("unknown command '" + cfg.command + "'");
    validate(cfg);
    cert["config"] = config_json(cfg);
    const Context ctx(cfg);
    cert["field"] = field_json(ctx.f());
    json res = json::object();
    const bool ok = it->second(ctx, res);
    cert["result"] = std::move(res);
    cert["ok"] = ok;
    out.exit_code = ok ? 0 : 1;
  } catch (const ConfigError& e) {
    cert["error"] = {{"kind", "config"}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const WorkLimitExceeded& e) {
    cert["error"] = {{"kind", "work_limit"}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const FieldError& e) {
    cert["error"] = {{"kind", "field"}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const AmbientMismatch& e) {
    cert["error"] = {{"kind", "input"}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const DegenerateSystem& e) {
    cert["error"] = {{"kind", "degenerate_system"}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const std::invalid_argument& e) {
    cert["error"] = {{"kind", "config"}, {"message", e.what()}};
    out.exit_code = 2;
  }
  cert["runtime"] = {{"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
                     {"workers", cfg.workers}};
  return out;
}

}  // namespace scatter
