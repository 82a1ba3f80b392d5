#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oho/format.hpp"
#include "oho/lax.hpp"
#include "oho/qjacobi.hpp"

namespace oho::cli {

using nlohmann::json;

namespace {

struct Check
{
  std::string name;
  double value;
  std::string rule;
  bool passed;
};

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f)
    throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg)
{
  std::filesystem::path dir(resolve_out_dir(cfg));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

int report(const char* cmd, const std::vector<Check>& checks, std::ostream& out, std::ostream& err)
{
  bool ok = true;
  for (const Check& c : checks) {
    out << cmd << ": " << (c.passed ? "ok   " : "FAIL ") << c.name << " = " << sci(c.value) << " (" << c.rule
        << ")\n";
    if (!c.passed) {
      err << cmd << ": check failed: " << c.name << '\n';
      ok = false;
    }
  }
  return ok ? kPass : kCheckFailed;
}

json config_json(const RunConfig& cfg)
{
  json j;
  j["omega"] = cfg.omega;
  j["energy"] = cfg.energy;
  j["family"] = cfg.family;
  j["a"] = cfg.a;
  j["hbar"] = cfg.hbar_list;
  j["N"] = cfg.N_override ? json(*cfg.N_override) : json(nullptr);
  j["t_points"] = cfg.t_points;
  j["t_periods"] = cfg.t_periods;
  j["dt"] = cfg.dt ? json(*cfg.dt) : json(nullptr);
  j["seed"] = cfg.seed;
  j["band"] = cfg.band;
  j["ordering"] = cfg.ordering;
  return j;
}

BianchiSpec spec_of(const RunConfig& cfg) { return BianchiSpec(parse_family(cfg.family), cfg.a); }

std::string csv_row_values(const std::array<double, 9>& v)
{
  std::string s;
  for (double x : v)
    s += ',' + format_double(x);
  return s;
}

double table_vs_columns(const StructureTable& mu, const std::array<double, 9>& cols)
{
  const auto c = mu.columns();
  double r = 0.0;
  for (std::size_t k = 0; k < 9; ++k)
    r = std::max(r, std::abs(c[k] - cols[k]));
  return r;
}

} // namespace

// ---------------------------------------------------------------------------
// Configuration

void RunConfig::validate() const
{
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw ConfigError("omega must be finite and > 0");
  if (!(energy > 0.0) || !std::isfinite(energy))
    throw ConfigError("energy must be finite and > 0");
  try {
    BianchiSpec(parse_family(family), a);
    parse_ordering(ordering);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (hbar_list.empty())
    throw ConfigError("hbar list is empty");
  for (std::size_t k = 0; k < hbar_list.size(); ++k) {
    if (!(hbar_list[k] > 0.0) || !std::isfinite(hbar_list[k]))
      throw ConfigError("hbar values must be finite and > 0");
    if (k > 0 && !(hbar_list[k] < hbar_list[k - 1]))
      throw ConfigError("hbar list must be strictly decreasing");
  }
  if (N_override && *N_override < 4)
    throw ConfigError("N must be >= 4");
  if (t_points < 2)
    throw ConfigError("t_points must be >= 2");
  if (!(t_periods > 0.0))
    throw ConfigError("t_periods must be > 0");
  if (dt && !(*dt > 0.0))
    throw ConfigError("dt must be > 0");
  if (!(band > 0.0))
    throw ConfigError("band must be > 0");
}

void merge_json(RunConfig& cfg, const std::string& json_text)
{
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "omega")
        cfg.omega = v.get<double>();
      else if (key == "energy" || key == "E")
        cfg.energy = v.get<double>();
      else if (key == "family")
        cfg.family = v.get<std::string>();
      else if (key == "a")
        cfg.a = v.get<double>();
      else if (key == "hbar")
        cfg.hbar_list = v.get<std::vector<double>>();
      else if (key == "N")
        cfg.N_override = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
      else if (key == "t_points")
        cfg.t_points = v.get<int>();
      else if (key == "t_periods")
        cfg.t_periods = v.get<double>();
      else if (key == "dt")
        cfg.dt = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "out")
        cfg.out_dir = v.get<std::string>();
      else if (key == "seed")
        cfg.seed = v.get<std::uint64_t>();
      else if (key == "band")
        cfg.band = v.get<double>();
      else if (key == "ordering")
        cfg.ordering = v.get<std::string>();
      else
        throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
}

RunConfig load_config(const std::string& path)
{
  std::ifstream f(path);
  if (!f)
    throw ConfigError("cannot read config file " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  RunConfig cfg;
  merge_json(cfg, text);
  return cfg;
}

std::string resolve_out_dir(const RunConfig& cfg)
{
  if (!cfg.out_dir.empty())
    return cfg.out_dir;
  if (const char* env = std::getenv("OPERADIC_HO_OUT"); env && *env)
    return env;
  return ".";
}

// ---------------------------------------------------------------------------
// verify-lax

int cmd_verify_lax(const RunConfig& cfg, bool corrupt_m, std::ostream& out, std::ostream& err)
{
  cfg.validate();
  const OscParams params = OscParams::from_energy(cfg.omega, cfg.energy);
  const BianchiSpec spec = spec_of(cfg);
  const double T = params.period();
  const double span = cfg.t_periods * T;
  Mat3 M = build_M(params);
  if (corrupt_m)
    M = -M;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ut(0.0, span);

  json grid = json::array();
  double mat_max = 0.0;
  double spec_max = 0.0;
  Vec3 expected(-params.p0(), params.p0(), 1.0);
  std::sort(expected.data(), expected.data() + 3);
  for (int k = 0; k < cfg.t_points; ++k) {
    const double t = span * k / cfg.t_points;
    const double r = matrix_lax_residual(t, params, M);
    const OscState s = analytic_state(t, params);
    const double sd = (lax_spectrum(s.q, s.p, params) - expected).cwiseAbs().maxCoeff();
    mat_max = std::max(mat_max, r);
    spec_max = std::max(spec_max, sd);
    grid.push_back({{"t", t}, {"matrix_residual", r}, {"spectrum_deviation", sd}});
  }
  for (int k = 0; k < 1000; ++k)
    mat_max = std::max(mat_max, matrix_lax_residual(ut(rng), params, M));

  const double dt0 = cfg.dt.value_or(1e-3 * T);
  json rich = json::array();
  double ratio_lo = INFINITY, ratio_hi = -INFINITY;
  for (double frac : {0.13, 0.37, 0.61, 0.89, 1.27}) {
    const double t = frac * T;
    std::array<double, 3> res{};
    std::array<double, 3> dts{dt0, dt0 / 2.0, dt0 / 4.0};
    for (std::size_t k = 0; k < 3; ++k)
      res[k] = operadic_lax_residual(spec, t, dts[k], params);
    const std::array<double, 2> ratios{res[0] / res[1], res[1] / res[2]};
    for (double r : ratios) {
      ratio_lo = std::min(ratio_lo, r);
      ratio_hi = std::max(ratio_hi, r);
    }
    rich.push_back({{"t", t}, {"dt", dts}, {"residual", res}, {"ratio", ratios}});
  }

  std::uniform_real_distribution<double> uq(-1.5 * params.p0() / params.omega(), 1.5 * params.p0() / params.omega());
  std::uniform_real_distribution<double> up(-1.5 * params.p0(), 1.5 * params.p0());
  double pde_max = 0.0;
  for (int n = 0; n < 100;) {
    const double q = uq(rng), p = up(rng);
    if (hamiltonian(q, p, params.omega()) <= 0.1)
      continue;
    pde_max = std::max(pde_max, operadic_lax_pde_residual(spec, q, p, params));
    ++n;
  }

  const bool rich_ok = ratio_lo >= 3.6 && ratio_hi <= 4.4;
  const std::vector<Check> checks{
      {"matrix_lax", mat_max, "< 1e-12", mat_max < 1e-12},
      {"isospectrality", spec_max, "< 1e-10", spec_max < 1e-10},
      {"richardson_min", ratio_lo, "in [3.6, 4.4]", rich_ok},
      {"richardson_max", ratio_hi, "in [3.6, 4.4]", rich_ok},
      {"operadic_lax_pde", pde_max, "< 1e-10", pde_max < 1e-10},
  };

  json rep;
  rep["config"] = config_json(cfg);
  rep["family"] = std::string(spec.name());
  rep["corrupt_m"] = corrupt_m;
  rep["grid"] = grid;
  rep["richardson"] = rich;
  rep["pde"] = {{"points", 100}, {"max_residual", pde_max}};
  json jc = json::array();
  bool all = true;
  for (const Check& c : checks) {
    jc.push_back({{"name", c.name}, {"value", c.value}, {"rule", c.rule}, {"passed", c.passed}});
    all = all && c.passed;
  }
  rep["checks"] = jc;
  rep["passed"] = all;
  const auto dir = prepare_out_dir(cfg);
  write_file(dir / "lax_report.json", rep.dump(2) + "\n");
  return report("verify-lax", checks, out, err);
}

// ---------------------------------------------------------------------------
// tables

int cmd_tables(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  cfg.validate();
  const OscParams params = OscParams::from_energy(cfg.omega, cfg.energy);
  const BianchiSpec spec = spec_of(cfg);
  const std::string fam(spec.name());
  const std::string a = format_double(spec.a());
  const double span = cfg.t_periods * params.period();

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<Vec3, 3>> triples(16);
  for (auto& tr : triples)
    for (auto& v : tr)
      v = Vec3(u(rng), u(rng), u(rng));
  auto jacobiator = [&](const StructureTable& mu) {
    double r = 0.0;
    for (const auto& [x, y, z] : triples)
      r = std::max(r, classical_jacobiator(mu, x, y, z).cwiseAbs().maxCoeff());
    return r;
  };

  std::ostringstream csv;
  csv << "record,family,a,t,v1,v2,v3,v4,v5,v6,v7,v8,v9,resid,jacobiator\n";

  const StructureTable t1 = spec.initial_table();
  const double t1_resid = t1.max_abs_diff(evolve_algebra(spec, 0.0, params));
  const double t1_jac = jacobiator(t1);
  csv << "table1," << fam << ',' << a << ",0" << csv_row_values(t1.columns()) << ',' << format_double(t1_resid)
      << ',' << format_double(t1_jac) << '\n';

  const CParams C = solve_constants(t1, params.p0());
  const double c_resid = build_mu(C, analytic_state(0.0, params), quasi_state(0.0, params), params).max_abs_diff(t1);
  csv << "constants," << fam << ',' << a << ",0" << csv_row_values(C.c) << ',' << format_double(c_resid) << ",\n";

  double t2_max = 0.0, jac_max = t1_jac;
  for (int k = 0; k < cfg.t_points; ++k) {
    const double t = span * k / cfg.t_points;
    const StructureTable ev = evolve_algebra(spec, t, params);
    const double resid = table_vs_columns(theorem_algebra(spec, t, params), ev.columns());
    const double jac = jacobiator(ev);
    t2_max = std::max(t2_max, resid);
    jac_max = std::max(jac_max, jac);
    csv << "table2," << fam << ',' << a << ',' << format_double(t) << csv_row_values(ev.columns()) << ','
        << format_double(resid) << ',' << format_double(jac) << '\n';
  }

  const std::vector<Check> checks{
      {"table1_at_t0", t1_resid, "== 0", t1_resid == 0.0},
      {"constants_round_trip", c_resid, "< 1e-12", c_resid < 1e-12},
      {"constants_valid", C.valid() ? 1.0 : 0.0, "nondegenerate", C.valid()},
      {"table2_round_trip", t2_max, "< 1e-12", t2_max < 1e-12},
      {"classical_jacobiator", jac_max, "< 1e-10", jac_max < 1e-10},
  };
  const auto dir = prepare_out_dir(cfg);
  write_file(dir / "tables_report.csv", csv.str());
  return report("tables", checks, out, err);
}

// ---------------------------------------------------------------------------
// semiclassical

int cmd_semiclassical(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  cfg.validate();
  if (cfg.hbar_list.size() < 3)
    throw ConfigError("semiclassical needs at least three hbar values");
  const BianchiSpec spec = spec_of(cfg);

  std::vector<QuasiCcrRow> ccr;
  for (double hb : cfg.hbar_list) {
    try {
      ccr.push_back(quasi_ccr_point(cfg.omega, cfg.energy, hb, cfg.N_override));
    } catch (const TruncationError& e) {
      err << "semiclassical: truncation failure at hbar = " << format_double(hb) << ": " << e.what() << '\n';
      return kCheckFailed;
    }
  }

  const auto [x, y, z] = random_triple(cfg.seed);
  ScalingOptions opt;
  opt.ordering = parse_ordering(cfg.ordering);
  opt.N_override = cfg.N_override;
  std::vector<ScalingRow> rows;
  try {
    rows = jacobi_deformation_scaling(spec, cfg.omega, cfg.energy, cfg.hbar_list, x, y, z, opt);
  } catch (const TruncationError& e) {
    err << "semiclassical: truncation failure in the Jacobi sweep: " << e.what() << '\n';
    return kCheckFailed;
  }

  std::ostringstream qcsv;
  qcsv << "hbar,N,sym_resid,comm_ratio\n";
  for (const QuasiCcrRow& r : ccr)
    qcsv << format_double(r.hbar) << ',' << r.N << ',' << format_double(r.sym_resid) << ','
         << format_double(r.comm_ratio) << '\n';

  auto decreasing = [](auto&& values) {
    for (std::size_t k = 1; k < values.size(); ++k)
      if (!(values[k] < values[k - 1]))
        return false;
    return true;
  };
  std::vector<double> sym, comm;
  for (const QuasiCcrRow& r : ccr) {
    sym.push_back(r.sym_resid);
    comm.push_back(r.comm_resid);
  }
  std::array<std::vector<double>, 3> jres;
  for (const ScalingRow& r : rows)
    for (std::size_t i = 0; i < 3; ++i)
      jres[i].push_back(r.J_resid[i]);

  const double target = cfg.omega / (2.0 * std::sqrt(2.0 * cfg.energy));
  const double rel = std::abs(ccr.back().comm_ratio - target) / target;
  std::vector<Check> checks{
      {"sym_resid_decreasing", sym.back(), "monotone", decreasing(sym)},
      {"comm_resid_decreasing", comm.back(), "monotone", decreasing(comm)},
  };
  for (std::size_t i = 0; i < 3; ++i)
    checks.push_back({"J" + std::to_string(i + 1) + "_resid_decreasing", jres[i].back(), "monotone",
                      decreasing(jres[i])});
  checks.push_back({"comm_ratio_band", rel, "relative deviation <= " + std::to_string(cfg.band).erase(std::to_string(cfg.band).find_last_not_of('0') + 1), rel <= cfg.band});

  const auto dir = prepare_out_dir(cfg);
  write_file(dir / "semiclassical.csv", scaling_csv(rows));
  write_file(dir / "quasiccr.csv", qcsv.str());
  return report("semiclassical", checks, out, err);
}

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Operadic Lax pairs, Bianchi algebras and quantum Jacobi operators for the harmonic oscillator",
               "operadic-ho"};
  app.require_subcommand(1);

  std::string config_path;
  double omega = 0, energy = 0, a = 0, dt = 0, band = 0;
  std::string family, out_dir, ordering;
  std::vector<double> hbar;
  std::uint64_t seed = 0;
  int N = 0;
  bool corrupt_m = false;
  std::vector<CLI::Option*> opts;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--omega", omega, "Oscillator frequency");
    sub->add_option("--energy,-E", energy, "Energy E (p0 = sqrt(2E))");
    sub->add_option("--family", family, "VII_a, III_1 or VI_a");
    sub->add_option("--a", a, "Bianchi parameter a");
    sub->add_option("--hbar", hbar, "Decreasing list of hbar values")->expected(1, -1);
    sub->add_option("--out", out_dir, "Output directory (default $OPERADIC_HO_OUT or .)");
    sub->add_option("--seed", seed, "Seed for random samples");
    sub->add_option("--N", N, "Fixed Fock truncation");
    sub->add_option("--dt", dt, "Base finite-difference step");
    sub->add_option("--band", band, "Relative band for the final commutator ratio");
    sub->add_option("--ordering", ordering, "left or right");
  };
  CLI::App* vl = app.add_subcommand("verify-lax", "Matrix and operadic Lax checks, writes lax_report.json");
  CLI::App* tb = app.add_subcommand("tables", "Bianchi tables and constants, writes tables_report.csv");
  CLI::App* sc = app.add_subcommand("semiclassical", "Quasi-CCR and Jacobi sweeps, writes semiclassical.csv, quasiccr.csv");
  for (CLI::App* sub : {vl, tb, sc})
    common(sub);
  vl->add_flag("--corrupt-m", corrupt_m)->group("");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty())
      rev.pop_back();
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto given = [&](const char* name) { return sub->count(name) > 0; };

  try {
    RunConfig cfg;
    if (given("--config"))
      cfg = load_config(config_path);
    if (given("--omega"))
      cfg.omega = omega;
    if (given("--energy"))
      cfg.energy = energy;
    if (given("--family"))
      cfg.family = family;
    if (given("--a"))
      cfg.a = a;
    if (given("--hbar"))
      cfg.hbar_list = hbar;
    if (given("--out"))
      cfg.out_dir = out_dir;
    if (given("--seed"))
      cfg.seed = seed;
    if (given("--N"))
      cfg.N_override = N;
    if (given("--dt"))
      cfg.dt = dt;
    if (given("--band"))
      cfg.band = band;
    if (given("--ordering"))
      cfg.ordering = ordering;

    if (sub == vl)
      return cmd_verify_lax(cfg, corrupt_m, out, err);
    if (sub == tb)
      return cmd_tables(cfg, out, err);
    return cmd_semiclassical(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
}

} // namespace oho::cli
