// covermix command-line interface: presets and spec files in, experiment
// CSV/JSON out.  Exit codes: 0 success, 2 validation/schema error, 3 missing
// Gram matrix under --exact, 4 budget exceeded, 5 numeric failure.
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "covermix/counting.hpp"
#include "covermix/cover.hpp"
#include "covermix/io.hpp"
#include "covermix/mixing.hpp"
#include "covermix/presentation.hpp"
#include "covermix/qsum.hpp"
#include "covermix/shift.hpp"

using namespace covermix;
using nlohmann::json;

namespace {

int exit_code(ErrKind k) {
  switch (k) {
    case ErrKind::gram_missing:
      return 3;
    case ErrKind::budget_exceeded:
      return 4;
    case ErrKind::cusp_escape:
    case ErrKind::overflow:
    case ErrKind::numeric:
      return 5;
    default:
      return 2;  // validation/schema class
  }
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  require(bool(out), ErrKind::validation, "cannot write file: " + path);
  out << content;
}

void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

// group source: exactly one of --preset / --group
struct GroupArgs {
  std::string preset;
  std::string file;

  void attach(CLI::App* cmd) {
    cmd->add_option("--preset", preset,
                    "built-in group: gamma2 | punctured_torus");
    cmd->add_option("--group", file, "group spec JSON file");
  }
  GroupPresentation load() const {
    require(preset.empty() != file.empty(), ErrKind::validation,
            "give exactly one of --preset or --group");
    if (!preset.empty()) {
      auto g = preset_by_name(preset);
      require(bool(g), ErrKind::validation, "unknown preset: " + preset);
      return *g;
    }
    return group_from_json(load_json_file(file));
  }
  json config() const {
    return preset.empty() ? json{{"group_file", file}}
                          : json{{"preset", preset}};
  }
};

std::pair<double, double> parse_window(const std::string& text) {
  auto g = parse_grid(text);  // validates lo:hi[:step]
  return {g.front(), g.back()};
}

StepWindow parse_u(const std::string& text) {
  auto [lo, hi] = parse_window(text);
  require(hi > lo, ErrKind::validation, "window needs hi > lo");
  return indicator_window(lo, hi, true, true);
}

std::vector<double> parse_phi_obs(const std::string& text, int n) {
  if (text == "one") return std::vector<double>(std::size_t(n), 1.0);
  auto v = parse_double_list(text);
  require(int(v.size()) == n, ErrKind::validation,
          "observable needs one value per state");
  return v;
}

// fit when the window holds enough points; null report otherwise
json fit_or_null(const std::function<FitReport()>& run, std::string* csv_note,
                 FitReport* out) {
  try {
    FitReport r = run();
    if (out) *out = r;
    return fit_report_json(r);
  } catch (const Error& e) {
    if (e.kind != ErrKind::insufficient_data) throw;
    if (csv_note) *csv_note = e.what();
    return nullptr;
  }
}

PointH2 parse_point(const std::string& text) {
  auto v = parse_double_list(text);
  require(v.size() == 2, ErrKind::validation, "point must be x,y");
  return point_checked(v[0], v[1]);
}

int run(int argc, char** argv) {
  CLI::App app{
      "covermix: cover invariants, orbit and geodesic counting, flow-box "
      "correlations, and symbolic transfer-operator experiments for "
      "Z^d covers of cusped hyperbolic surfaces"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads for parallel kernels (0 = library default)")
      ->envname("COVERMIX_THREADS");

  // ---- invariants ----
  auto* inv_cmd = app.add_subcommand(
      "invariants", "cover invariants (p, h, m0) and the rate constant c");
  GroupArgs inv_group;
  inv_group.attach(inv_cmd);
  std::string inv_phi = "identity", inv_gram, inv_out;
  bool inv_exact = false;
  double inv_tol = 1e-9;
  inv_cmd->add_option("--phi", inv_phi,
                      "cover map: identity | JSON rows, e.g. [[1,0]]");
  inv_cmd->add_option("--gram", inv_gram, "Gram matrix JSON file for E_h");
  inv_cmd->add_flag("--exact", inv_exact,
                    "fail (exit 3) instead of reporting a partial constant");
  inv_cmd->add_option("--quad-tol", inv_tol, "quadrature relative tolerance");
  inv_cmd->add_option("--out", inv_out, "output JSON path (default stdout)");

  // ---- orbit-count ----
  auto* orb_cmd = app.add_subcommand(
      "orbit-count", "kernel-orbit counting N(T) = #{dist(x, gamma y) < T}");
  GroupArgs orb_group;
  orb_group.attach(orb_cmd);
  std::string orb_phi = "identity", orb_grid, orb_window, orb_csv, orb_json;
  std::string orb_x = "0,1", orb_y = "0,1";
  std::string orb_alphas = "0,0.5,1,1.5,2";
  double orb_margin = 4.0;
  long long orb_budget = 0;
  bool orb_dry = false, orb_serial = false;
  orb_cmd->add_option("--phi", orb_phi, "cover map (identity | JSON rows)");
  orb_cmd->add_option("--T-grid", orb_grid, "radius grid lo:hi[:step]")
      ->required();
  orb_cmd->add_option("--x", orb_x, "observation point x,y");
  orb_cmd->add_option("--y", orb_y, "orbit base point x,y");
  orb_cmd->add_option("--window", orb_window, "fit window lo:hi (default grid)");
  orb_cmd->add_option("--alphas", orb_alphas, "candidate exponents");
  orb_cmd->add_option("--margin", orb_margin, "enumeration pruning margin");
  orb_cmd->add_option("--max-nodes", orb_budget, "node budget (0 = unlimited)");
  orb_cmd->add_flag("--serial", orb_serial, "disable the parallel kernel");
  orb_cmd->add_flag("--dry-run", orb_dry, "estimate the budget and exit");
  orb_cmd->add_option("--csv", orb_csv, "CSV path (default stdout)");
  orb_cmd->add_option("--json", orb_json, "fit report path (default stdout)");

  // ---- geodesics ----
  auto* geo_cmd = app.add_subcommand(
      "geodesics", "homology-constrained primitive closed geodesic counts");
  GroupArgs geo_group;
  geo_group.attach(geo_cmd);
  std::string geo_phi = "identity", geo_grid, geo_window, geo_csv, geo_json;
  std::string geo_xi, geo_alphas = "1,1.5,2,2.5,3";
  double geo_margin = 4.0;
  long long geo_budget = 0;
  bool geo_dry = false;
  geo_cmd->add_option("--phi", geo_phi, "cover map (identity | JSON rows)");
  geo_cmd->add_option("--T-grid", geo_grid, "length grid lo:hi[:step]")
      ->required();
  geo_cmd->add_option("--xi", geo_xi, "homology class (default all zero)");
  geo_cmd->add_option("--window", geo_window, "fit window lo:hi (default grid)");
  geo_cmd->add_option("--alphas", geo_alphas, "candidate exponents");
  geo_cmd->add_option("--margin", geo_margin, "conjugacy search margin");
  geo_cmd->add_option("--max-nodes", geo_budget, "node budget (0 = unlimited)");
  geo_cmd->add_flag("--dry-run", geo_dry, "estimate the budget and exit");
  geo_cmd->add_option("--csv", geo_csv, "CSV path (default stdout)");
  geo_cmd->add_option("--json", geo_json, "fit report path (default stdout)");

  // ---- matrix-coeff ----
  auto* mix_cmd = app.add_subcommand(
      "matrix-coeff", "Monte Carlo flow-box correlation decay");
  GroupArgs mix_group;
  mix_group.attach(mix_cmd);
  std::string mix_phi = "identity", mix_grid, mix_window, mix_csv, mix_json;
  std::string mix_boxA, mix_boxB, mix_alphas = "0.5,1,1.5,2";
  double mix_samples = 1e6, mix_dt = 0.5, mix_discard = 1e-3;
  std::uint64_t mix_seed = 1;
  bool mix_dry = false, mix_serial = false;
  mix_cmd->add_option("--phi", mix_phi, "cover map (identity | JSON rows)");
  mix_cmd->add_option("--boxA", mix_boxA, "flow box A JSON file")->required();
  mix_cmd->add_option("--boxB", mix_boxB, "flow box B JSON file")->required();
  mix_cmd->add_option("--t-grid", mix_grid, "time grid lo:hi[:step]")
      ->required();
  mix_cmd->add_option("--samples", mix_samples, "samples per grid point");
  mix_cmd->add_option("--seed", mix_seed, "64-bit stream seed");
  mix_cmd->add_option("--dt", mix_dt, "reduction leg length");
  mix_cmd->add_option("--max-discard", mix_discard,
                      "tolerated cusp-escape fraction");
  mix_cmd->add_option("--window", mix_window, "fit window lo:hi (default grid)");
  mix_cmd->add_option("--alphas", mix_alphas, "candidate decay exponents");
  mix_cmd->add_flag("--serial", mix_serial, "disable the parallel sampler");
  mix_cmd->add_flag("--dry-run", mix_dry, "estimate the budget and exit");
  mix_cmd->add_option("--csv", mix_csv, "CSV path (default stdout)");
  mix_cmd->add_option("--json", mix_json, "fit report path (default stdout)");

  // ---- symbolic ----
  auto* sym_cmd = app.add_subcommand(
      "symbolic", "finite-shift transfer-operator experiments");
  sym_cmd->require_subcommand(1);
  std::string sym_shift;
  int sym_truncate = 0;
  sym_cmd->add_option("--shift", sym_shift, "shift spec JSON file")
      ->required();
  sym_cmd->add_option("--truncate", sym_truncate,
                      "keep only the first N states (countable-spec loader)");

  auto* pre_cmd =
      sym_cmd->add_subcommand("pressure", "leading eigenvalue and pressure");
  std::string pre_out;
  pre_cmd->add_option("--out", pre_out, "output JSON path (default stdout)");

  auto* gib_cmd = sym_cmd->add_subcommand(
      "gibbs", "Perron data: lambda, psi, rho, nu, normalized roof");
  std::string gib_out;
  gib_cmd->add_option("--out", gib_out, "output JSON path (default stdout)");

  auto* qs_cmd = sym_cmd->add_subcommand(
      "qsum", "windowed path sum Q_t at one (x, xi, t)");
  int qs_x = 0;
  std::string qs_xi, qs_u = "-0.5:0.5", qs_phi = "one", qs_out;
  double qs_t = 0.0;
  long long qs_budget = 0;
  bool qs_dry = false;
  qs_cmd->add_option("--x", qs_x, "target state");
  qs_cmd->add_option("--xi", qs_xi, "displacement class (default zero)");
  qs_cmd->add_option("--t", qs_t, "time")->required();
  qs_cmd->add_option("--u", qs_u, "window lo:hi (closed)");
  qs_cmd->add_option("--Phi", qs_phi, "observable: one | per-state list");
  qs_cmd->add_option("--max-nodes", qs_budget, "node budget (0 = unlimited)");
  qs_cmd->add_flag("--dry-run", qs_dry, "estimate the budget and exit");
  qs_cmd->add_option("--json", qs_out, "output JSON path");

  auto* it_cmd = sym_cmd->add_subcommand(
      "it-check", "correlation sum I_t, direct vs unfolded");
  std::string it_xi1, it_xi2, it_u1 = "-0.5:0.5", it_u2 = "-0.5:0.5";
  std::string it_phi1 = "one", it_phi2 = "one", it_out;
  double it_t = 0.0, it_m0 = 1.0;
  long long it_budget = 0;
  it_cmd->add_option("--t", it_t, "time")->required();
  it_cmd->add_option("--m0", it_m0, "mass prefactor");
  it_cmd->add_option("--xi1", it_xi1, "first sheet (default zero)");
  it_cmd->add_option("--xi2", it_xi2, "second sheet (default zero)");
  it_cmd->add_option("--u1", it_u1, "first window lo:hi");
  it_cmd->add_option("--u2", it_u2, "second window lo:hi");
  it_cmd->add_option("--Phi1", it_phi1, "first observable");
  it_cmd->add_option("--Phi2", it_phi2, "second observable");
  it_cmd->add_option("--max-nodes", it_budget, "node budget (0 = unlimited)");
  it_cmd->add_option("--json", it_out, "output JSON path");

  auto* llt_cmd = sym_cmd->add_subcommand(
      "llt", "scaled window-sum series against the local-limit prediction");
  std::string llt_grid, llt_xi, llt_csv, llt_json;
  int llt_x = 0, llt_theta = 64;
  double llt_fd = 1e-3;
  long long llt_budget = 0;
  bool llt_dry = false;
  llt_cmd->add_option("--t-grid", llt_grid, "time grid lo:hi[:step]")
      ->required();
  llt_cmd->add_option("--x", llt_x, "target state");
  llt_cmd->add_option("--xi", llt_xi, "displacement class (default zero)");
  llt_cmd->add_option("--theta-grid", llt_theta, "aperiodicity scan points");
  llt_cmd->add_option("--fd-step", llt_fd, "covariance finite-difference step");
  llt_cmd->add_option("--max-nodes", llt_budget, "node budget (0 = unlimited)");
  llt_cmd->add_flag("--dry-run", llt_dry, "estimate the budget and exit");
  llt_cmd->add_option("--csv", llt_csv, "CSV path (default stdout)");
  llt_cmd->add_option("--json", llt_json, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (threads > 0) omp_set_num_threads(threads);

  // ---- dispatch ----
  if (*inv_cmd) {
    GroupPresentation g = inv_group.load();
    CoverSpec spec = cover_from_string(inv_phi, g.rank);
    std::optional<HGram> gram;
    if (!inv_gram.empty()) gram = gram_from_json(load_json_file(inv_gram));
    CoverInvariants inv = invariants(g, spec);
    ConstantC cc = constant_c(inv, gram, inv_exact, inv_tol);
    json config = inv_group.config();
    config["command"] = "invariants";
    config["phi"] = inv_phi;
    config["gram"] = !inv_gram.empty();
    config["exact"] = inv_exact;
    config["quad_tol"] = inv_tol;
    json out{{"provenance", provenance_json(config, 0)},
             {"residue_matrix", inv.residue_matrix},
             {"d", inv.d},
             {"p", inv.p},
             {"h", inv.h},
             {"m0", inv.m0},
             {"c", cc.c},
             {"c_exact", cc.exact},
             {"p_factor", cc.p_factor},
             {"h_factor", cc.h_factor},
             {"rel_error", cc.rel_error},
             {"basis_ep", inv.basis_ep},
             {"basis_eh", inv.basis_eh}};
    write_json(inv_out, out);
    return 0;
  }

  if (*orb_cmd || *geo_cmd) {
    bool orbit = bool(*orb_cmd);
    GroupArgs& grp = orbit ? orb_group : geo_group;
    GroupPresentation g = grp.load();
    CoverSpec spec = cover_from_string(orbit ? orb_phi : geo_phi, g.rank);
    auto grid = parse_grid(orbit ? orb_grid : geo_grid);
    auto alphas = parse_double_list(orbit ? orb_alphas : geo_alphas);
    double margin = orbit ? orb_margin : geo_margin;
    long long budget = orbit ? orb_budget : geo_budget;
    std::vector<long long> xi(std::size_t(spec.d), 0);
    if (!orbit && !geo_xi.empty()) {
      xi = parse_int_list(geo_xi);
      require(int(xi.size()) == spec.d, ErrKind::validation,
              "--xi needs one entry per cover dimension");
    }
    auto [w_lo, w_hi] = (orbit ? orb_window : geo_window).empty()
                            ? std::pair<double, double>{grid.front(),
                                                        grid.back()}
                            : parse_window(orbit ? orb_window : geo_window);

    json config = grp.config();
    config["command"] = orbit ? "orbit-count" : "geodesics";
    config["phi"] = orbit ? orb_phi : geo_phi;
    config["T_grid"] = orbit ? orb_grid : geo_grid;
    config["window"] = json::array({w_lo, w_hi});
    config["alphas"] = alphas;
    config["margin"] = margin;
    config["max_nodes"] = budget;
    if (orbit) {
      config["x"] = orb_x;
      config["y"] = orb_y;
      config["parallel"] = !orb_serial;
    } else {
      config["xi"] = xi;
    }

    if (orbit ? orb_dry : geo_dry) {
      // volume heuristic: enumeration work scales with the ball volume
      double nodes = 2.0 * std::exp(grid.back() + margin);
      json est{{"provenance", provenance_json(config, 0)},
               {"estimated_nodes", nodes},
               {"budget", budget},
               {"within_budget", budget == 0 || nodes <= double(budget)}};
      write_json(orbit ? orb_json : geo_json, est);
      return 0;
    }

    CountOptions opt;
    opt.margin = margin;
    opt.max_nodes = budget;
    if (orbit) opt.parallel = !orb_serial;
    CountSeries series =
        orbit ? orbit_count(g, spec, parse_point(orb_x), parse_point(orb_y),
                            grid, opt)
              : geodesic_count(g, spec, xi, grid, opt);

    std::string note;
    FitReport fit;
    json fit_json = fit_or_null(
        [&] { return fit_exponent(series, w_lo, w_hi, alphas); }, &note, &fit);
    std::string header = csv_provenance(config, 0);
    if (!note.empty()) header += "# fit skipped: " + note + "\n";
    write_text(orbit ? orb_csv : geo_csv,
               count_series_csv(series, fit_json.is_null() ? nullptr : &fit,
                                header));
    json report{{"provenance", provenance_json(config, 0)},
                {"fit", fit_json}};
    write_json(orbit ? orb_json : geo_json, report);
    return 0;
  }

  if (*mix_cmd) {
    GroupPresentation g = mix_group.load();
    CoverSpec spec = cover_from_string(mix_phi, g.rank);
    FlowBox boxA = box_from_json(load_json_file(mix_boxA));
    FlowBox boxB = box_from_json(load_json_file(mix_boxB));
    auto grid = parse_grid(mix_grid);
    auto alphas = parse_double_list(mix_alphas);
    long long n = std::llround(mix_samples);
    auto [w_lo, w_hi] =
        mix_window.empty()
            ? std::pair<double, double>{grid.front(), grid.back()}
            : parse_window(mix_window);

    json config = mix_group.config();
    config["command"] = "matrix-coeff";
    config["phi"] = mix_phi;
    config["boxA"] = mix_boxA;
    config["boxB"] = mix_boxB;
    config["t_grid"] = mix_grid;
    config["samples"] = n;
    config["dt"] = mix_dt;
    config["max_discard"] = mix_discard;
    config["window"] = json::array({w_lo, w_hi});
    config["alphas"] = alphas;
    config["parallel"] = !mix_serial;

    if (mix_dry) {
      double legs = 0;
      for (double t : grid) legs += std::ceil(t / mix_dt) * double(n);
      json est{{"provenance", provenance_json(config, mix_seed)},
               {"total_samples", double(n) * double(grid.size())},
               {"flow_legs", legs}};
      write_json(mix_json, est);
      return 0;
    }

    MixingOptions opt;
    opt.seed = mix_seed;
    opt.parallel = !mix_serial;
    opt.max_discard_fraction = mix_discard;
    opt.flow.dt = mix_dt;
    MixingSeries series =
        matrix_coefficient_series(g, spec, boxA, boxB, grid, n, opt);

    std::string note;
    json fit_json = fit_or_null(
        [&] { return decay_fit(series, w_lo, w_hi, alphas); }, &note, nullptr);
    std::string header = csv_provenance(config, mix_seed);
    if (!note.empty()) header += "# fit skipped: " + note + "\n";
    write_text(mix_csv, mixing_series_csv(series, header));
    json report{{"provenance", provenance_json(config, mix_seed)},
                {"fit", fit_json}};
    write_json(mix_json, report);
    return 0;
  }

  if (*sym_cmd) {
    ShiftSystem sys = shift_from_json(load_json_file(sym_shift), sym_truncate);
    json config{{"command", "symbolic"},
                {"shift_file", sym_shift},
                {"truncate", sym_truncate}};

    if (*pre_cmd || *gib_cmd) {
      GibbsData gd = leading_triple(sys.shift, sys.pot);
      config["subcommand"] = *pre_cmd ? "pressure" : "gibbs";
      json out{{"provenance", provenance_json(config, 0)},
               {"lambda", gd.lambda},
               {"pressure", gd.pressure}};
      if (*gib_cmd) {
        out["psi"] = gd.psi;
        out["rho"] = gd.rho;
        out["nu"] = gd.nu;
        out["r_hat"] = gd.r_hat;
      }
      write_json(*pre_cmd ? pre_out : gib_out, out);
      return 0;
    }

    if (*qs_cmd) {
      GibbsData gd = leading_triple(sys.shift, sys.pot);
      std::vector<long long> xi(std::size_t(sys.f.d), 0);
      if (!qs_xi.empty()) xi = parse_int_list(qs_xi);
      require(int(xi.size()) == sys.f.d, ErrKind::validation,
              "--xi needs one entry per displacement dimension");
      StepWindow u = parse_u(qs_u);
      auto Phi = parse_phi_obs(qs_phi, sys.shift.n);
      config["subcommand"] = "qsum";
      config["x"] = qs_x;
      config["xi"] = xi;
      config["t"] = qs_t;
      config["u"] = qs_u;
      config["Phi"] = qs_phi;
      config["max_nodes"] = qs_budget;
      if (qs_dry) {
        require(sys.pot.K > 0, ErrKind::validation,
                "roof admits no positive path certificate");
        double n_max =
            sys.pot.K * (qs_t + u.hi()) / sys.pot.C + sys.pot.K;
        double lattice = 1.0;
        for (int k = 0; k < sys.f.d; ++k)
          lattice *= 2.0 * double(sys.f.f_max) * n_max + 1.0;
        json est{{"provenance", provenance_json(config, 0)},
                 {"estimated_nodes",
                  double(sys.shift.n) * n_max * lattice},
                 {"budget", qs_budget}};
        write_json(qs_out, est);
        return 0;
      }
      QSumOptions opt;
      opt.max_nodes = qs_budget;
      double q = q_sum(sys.shift, gd.r_hat, sys.f, gd.psi, Phi, u, qs_x, xi,
                       qs_t, opt);
      std::printf("%.12g\n", q);
      if (!qs_out.empty()) {
        json out{{"provenance", provenance_json(config, 0)}, {"q", q}};
        write_json(qs_out, out);
      }
      return 0;
    }

    if (*it_cmd) {
      GibbsData gd = leading_triple(sys.shift, sys.pot);
      auto sheet = [&](const std::string& text) {
        std::vector<long long> xi(std::size_t(sys.f.d), 0);
        if (!text.empty()) xi = parse_int_list(text);
        require(int(xi.size()) == sys.f.d, ErrKind::validation,
                "sheet needs one entry per displacement dimension");
        return xi;
      };
      ProductObservable p1{parse_phi_obs(it_phi1, sys.shift.n), sheet(it_xi1),
                           parse_u(it_u1)};
      ProductObservable p2{parse_phi_obs(it_phi2, sys.shift.n), sheet(it_xi2),
                           parse_u(it_u2)};
      config["subcommand"] = "it-check";
      config["t"] = it_t;
      config["m0"] = it_m0;
      QSumOptions opt;
      opt.max_nodes = it_budget;
      ItPair pair = i_t(sys.shift, gd.r_hat, sys.f, gd, it_m0, p1, p2, it_t,
                        opt);
      double rel = std::fabs(pair.direct - pair.unfolded) /
                   (1.0 + std::fabs(pair.direct));
      std::printf("direct=%.12g unfolded=%.12g rel=%.3g\n", pair.direct,
                  pair.unfolded, rel);
      if (!it_out.empty()) {
        json out{{"provenance", provenance_json(config, 0)},
                 {"direct", pair.direct},
                 {"unfolded", pair.unfolded},
                 {"rel_diff", rel}};
        write_json(it_out, out);
      }
      return 0;
    }

    // llt
    GibbsData gd = leading_triple(sys.shift, sys.pot);
    auto grid = parse_grid(llt_grid);
    std::vector<long long> xi(std::size_t(sys.f.d), 0);
    if (!llt_xi.empty()) xi = parse_int_list(llt_xi);
    require(int(xi.size()) == sys.f.d, ErrKind::validation,
            "--xi needs one entry per displacement dimension");
    config["subcommand"] = "llt";
    config["t_grid"] = llt_grid;
    config["x"] = llt_x;
    config["xi"] = xi;
    config["theta_grid"] = llt_theta;
    config["fd_step"] = llt_fd;
    config["max_nodes"] = llt_budget;
    if (llt_dry) {
      require(sys.pot.K > 0, ErrKind::validation,
              "roof admits no positive path certificate");
      double n_max =
          sys.pot.K * (grid.back() + 0.5) / sys.pot.C + sys.pot.K;
      double lattice = 1.0;
      for (int k = 0; k < sys.f.d; ++k)
        lattice *= 2.0 * double(sys.f.f_max) * n_max + 1.0;
      json est{{"provenance", provenance_json(config, 0)},
               {"estimated_nodes",
                double(sys.shift.n) * n_max * lattice * double(grid.size())},
               {"budget", llt_budget}};
      write_json(llt_json, est);
      return 0;
    }
    LltOptions opt;
    opt.max_nodes = llt_budget;
    opt.theta_grid = llt_theta;
    opt.fd_step = llt_fd;
    LltSeries series =
        llt_series(sys.shift, gd.r_hat, sys.f, gd, grid, llt_x, xi, opt);
    std::string csv = csv_provenance(config, 0);
    csv += "t,scaled\n";
    for (std::size_t i = 0; i < series.t.size(); ++i)
      csv += fmt_g17(series.t[i]) + "," + fmt_g17(series.scaled[i]) + "\n";
    write_text(llt_csv, csv);
    json report{{"provenance", provenance_json(config, 0)},
                {"predicted_limit", series.predicted_limit},
                {"sigma", series.sigma},
                {"r_bar", series.r_bar},
                {"window_width", series.window_width}};
    write_json(llt_json, report);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  }
}
