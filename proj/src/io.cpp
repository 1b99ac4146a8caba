#include "covermix/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace covermix {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

static std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
  return buf;
}

std::string csv_provenance(const json& config, std::uint64_t seed) {
  std::string blob = config.dump();
  std::string out;
  out += std::string("# covermix ") + kVersion + "\n";
  out += "# config " + blob + "\n";
  out += "# config_hash " + hex64(fnv1a64(blob)) + "\n";
  out += "# seed " + std::to_string(seed) + "\n";
  return out;
}

json provenance_json(const json& config, std::uint64_t seed) {
  std::string blob = config.dump();
  return json{{"version", kVersion},
              {"config", config},
              {"config_hash", hex64(fnv1a64(blob))},
              {"seed", seed}};
}

json parse_json_text(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), ErrKind::validation,
          what + ": malformed JSON");
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), ErrKind::validation, "cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// ---- schema helpers -------------------------------------------------------

static const json& field(const json& j, const char* key,
                         const std::string& what) {
  require(j.is_object(), ErrKind::validation, what + ": expected an object");
  auto it = j.find(key);
  require(it != j.end(), ErrKind::validation,
          what + ": missing field \"" + key + "\"");
  return *it;
}

static long long as_int(const json& j, const std::string& what) {
  require(j.is_number_integer(), ErrKind::validation,
          what + ": expected an integer");
  return j.get<long long>();
}

static double as_real(const json& j, const std::string& what) {
  require(j.is_number(), ErrKind::validation, what + ": expected a number");
  return j.get<double>();
}

static std::vector<std::vector<long long>> as_int_matrix(
    const json& j, const std::string& what) {
  require(j.is_array(), ErrKind::validation, what + ": expected an array");
  std::vector<std::vector<long long>> m;
  for (const auto& row : j) {
    require(row.is_array(), ErrKind::validation,
            what + ": expected an array of arrays");
    std::vector<long long> r;
    for (const auto& v : row) r.push_back(as_int(v, what));
    m.push_back(std::move(r));
  }
  return m;
}

static std::vector<std::vector<double>> as_real_matrix(
    const json& j, const std::string& what) {
  require(j.is_array(), ErrKind::validation, what + ": expected an array");
  std::vector<std::vector<double>> m;
  for (const auto& row : j) {
    require(row.is_array(), ErrKind::validation,
            what + ": expected an array of arrays");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(as_real(v, what));
    m.push_back(std::move(r));
  }
  return m;
}

static std::vector<int> as_signed_indices(const json& j,
                                          const std::string& what) {
  require(j.is_array(), ErrKind::validation,
          what + ": expected a list of signed indices");
  std::vector<int> out;
  for (const auto& v : j) {
    long long k = as_int(v, what);
    require(k != 0 && std::llabs(k) <= 127, ErrKind::validation,
            what + ": generator indices are nonzero and 1-based");
    out.push_back(int(k));
  }
  return out;
}

// ---- group ----------------------------------------------------------------

// endpoint: number, "p/q", or "inf" (nullopt).
static bool parse_endpoint(const json& j, double& out,
                           const std::string& what) {
  if (j.is_number()) {
    out = j.get<double>();
    return true;
  }
  require(j.is_string(), ErrKind::validation,
          what + ": endpoint must be a number, \"p/q\", or \"inf\"");
  std::string s = j.get<std::string>();
  if (s == "inf" || s == "-inf") return false;
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t used = 0;
      out = std::stod(s, &used);
      require(used == s.size(), ErrKind::validation,
              what + ": bad endpoint \"" + s + "\"");
    } else {
      double num = std::stod(s.substr(0, slash));
      double den = std::stod(s.substr(slash + 1));
      require(den != 0.0, ErrKind::validation,
              what + ": zero denominator in \"" + s + "\"");
      out = num / den;
    }
  } catch (const std::logic_error&) {
    fail(ErrKind::validation, what + ": bad endpoint \"" + s + "\"");
  }
  return true;
}

GroupPresentation group_from_json(const json& j) {
  const std::string what = "group spec";
  GroupPresentation g;

  auto gens = as_int_matrix(field(j, "generators", what), what);
  require(!gens.empty(), ErrKind::validation, what + ": no generators");
  for (const auto& q : gens) {
    require(q.size() == 4, ErrKind::validation,
            what + ": each generator is a quadruple [a,b,c,d]");
    g.gens.push_back(moebius_checked(q[0], q[1], q[2], q[3]));
  }
  g.rank = int(g.gens.size());

  const json& cw = field(j, "cusp_words", what);
  require(cw.is_array(), ErrKind::validation,
          what + ": cusp_words must be an array");
  for (const auto& wj : cw)
    g.cusp_words.push_back(
        Word::from_indices(as_signed_indices(wj, what), g.rank));

  if (j.contains("genus")) g.genus = int(as_int(j.at("genus"), what));

  PointH2 z0 = base_point();
  if (j.contains("inside_point")) {
    const json& interior = j.at("inside_point");
    require(interior.is_array() && interior.size() == 2, ErrKind::validation,
            what + ": inside_point must be [x, y]");
    z0 = point_checked(as_real(interior[0], what), as_real(interior[1], what));
  }

  const json& sides = field(j, "sides", what);
  require(sides.is_array() && !sides.empty(), ErrKind::validation,
          what + ": sides must be a nonempty array");
  for (const auto& sj : sides) {
    double e1 = 0, e2 = 0;
    const json& ep = field(sj, "endpoints", what);
    require(ep.is_array() && ep.size() == 2, ErrKind::validation,
            what + ": endpoints must be a pair");
    bool f1 = parse_endpoint(ep[0], e1, what);
    bool f2 = parse_endpoint(ep[1], e2, what);
    PolygonSide side;
    if (f1 && f2) {
      require(e1 != e2, ErrKind::validation,
              what + ": side endpoints coincide");
      side.vertical = false;
      side.pos = 0.5 * (e1 + e2);
      side.radius = 0.5 * std::fabs(e1 - e2);
      double dx = z0.x - side.pos;
      double rr = std::sqrt(dx * dx + z0.y * z0.y);
      require(std::fabs(rr - side.radius) > 1e-12, ErrKind::validation,
              what + ": inside_point lies on a side; supply inside_point");
      side.inside_sign = rr > side.radius ? 1 : -1;
    } else {
      require(f1 != f2, ErrKind::validation,
              what + ": a side needs at least one finite endpoint");
      side.vertical = true;
      side.pos = f1 ? e1 : e2;
      require(std::fabs(z0.x - side.pos) > 1e-12, ErrKind::validation,
              what + ": inside_point lies on a side; supply inside_point");
      side.inside_sign = z0.x < side.pos ? 1 : -1;
    }
    side.ret = Word::from_indices(
        as_signed_indices(field(sj, "pairing", what), what), g.rank);
    g.sides.push_back(std::move(side));
  }

  validate(g);
  return g;
}

// ---- cover / gram / box ---------------------------------------------------

CoverSpec cover_from_json(const json& j, int rank) {
  const std::string what = "cover spec";
  CoverSpec spec;
  if (j.is_array()) {
    spec.phi = as_int_matrix(j, what);
    spec.d = int(spec.phi.size());
  } else {
    spec.d = int(as_int(field(j, "d", what), what));
    spec.phi = as_int_matrix(field(j, "phi", what), what);
    require(int(spec.phi.size()) == spec.d, ErrKind::validation,
            what + ": phi must have d rows");
  }
  for (const auto& row : spec.phi)
    require(int(row.size()) == rank, ErrKind::validation,
            what + ": each phi row needs one entry per generator");
  require(spec.d == int(spec.phi.size()), ErrKind::validation,
          what + ": d and phi disagree");
  return spec;
}

CoverSpec cover_from_string(const std::string& text, int rank) {
  if (text == "identity") {
    CoverSpec spec;
    spec.d = rank;
    spec.phi.assign(std::size_t(rank), std::vector<long long>(rank, 0));
    for (int i = 0; i < rank; ++i) spec.phi[std::size_t(i)][std::size_t(i)] = 1;
    return spec;
  }
  if (text == "none" || text.empty()) return CoverSpec{};
  return cover_from_json(parse_json_text(text, "cover spec"), rank);
}

HGram gram_from_json(const json& j) {
  HGram gram;
  gram.q = as_real_matrix(field(j, "q", "gram spec"), "gram spec");
  return gram;
}

FlowBox box_from_json(const json& j) {
  const std::string what = "box spec";
  auto pair = [&](const char* key, double& a, double& b) {
    const json& p = field(j, key, what);
    require(p.is_array() && p.size() == 2, ErrKind::validation,
            what + ": " + key + " must be [lo, hi]");
    a = as_real(p[0], what);
    b = as_real(p[1], what);
  };
  FlowBox box;
  pair("xrange", box.x1, box.x2);
  pair("yrange", box.y1, box.y2);
  pair("arc", box.theta1, box.theta2);
  const json& sheet = field(j, "sheet", what);
  require(sheet.is_array(), ErrKind::validation,
          what + ": sheet must be an integer vector");
  for (const auto& v : sheet) box.xi.push_back(as_int(v, what));
  return box;
}

// ---- shift ----------------------------------------------------------------

ShiftSystem shift_from_json(const json& j, int truncate_to) {
  const std::string what = "shift spec";
  std::vector<std::string> labels;
  int n = 0;
  const json& st = field(j, "states", what);
  if (st.is_number_integer()) {
    n = int(as_int(st, what));
  } else {
    require(st.is_array(), ErrKind::validation,
            what + ": states must be a count or a label list");
    for (const auto& v : st) {
      require(v.is_string(), ErrKind::validation,
              what + ": state labels must be strings");
      labels.push_back(v.get<std::string>());
    }
    n = int(labels.size());
  }
  require(n > 0, ErrKind::validation, what + ": empty state set");

  auto transition = as_int_matrix(field(j, "transition", what), what);
  auto r = as_real_matrix(field(j, "r", what), what);
  std::vector<std::vector<long long>> f;
  if (j.contains("f") && !j.at("f").empty())
    f = as_int_matrix(j.at("f"), what);

  require(int(transition.size()) == n && int(r.size()) == n,
          ErrKind::validation,
          what + ": transition and r must have one row per state");
  require(f.empty() || int(f.size()) == n, ErrKind::validation,
          what + ": f must have one row per state");

  if (truncate_to > 0 && truncate_to < n) {
    n = truncate_to;
    if (!labels.empty()) labels.resize(std::size_t(n));
    transition.resize(std::size_t(n));
    r.resize(std::size_t(n));
    if (!f.empty()) f.resize(std::size_t(n));
    for (auto& row : transition) row.resize(std::size_t(n));
    for (auto& row : r) row.resize(std::size_t(n));
  }

  ShiftSystem sys;
  std::vector<std::vector<int>> tr(std::size_t(n),
                                   std::vector<int>(std::size_t(n), 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      long long v = transition[std::size_t(a)][std::size_t(b)];
      require(v == 0 || v == 1, ErrKind::validation,
              what + ": transition entries are 0/1");
      tr[std::size_t(a)][std::size_t(b)] = int(v);
    }
  sys.shift = make_shift(std::move(tr), std::move(labels));

  double C = 0.0;
  int K = 0;
  if (j.contains("certificate")) {
    const json& cert = j.at("certificate");
    C = as_real(field(cert, "C", what), what);
    K = int(as_int(field(cert, "K", what), what));
  }
  sys.pot = make_potential(sys.shift, std::move(r), C, K);
  if (sys.pot.K == 0) find_certificate(sys.shift, sys.pot);

  sys.f = make_displacement(sys.shift, std::move(f));
  return sys;
}

// ---- reports --------------------------------------------------------------

json fit_report_json(const FitReport& r) {
  json out{{"alphas", r.alphas},
           {"constants", r.constants},
           {"residuals", r.residuals},
           {"selected_index", r.selected_index},
           {"selected_alpha", r.selected_alpha},
           {"selected_constant", r.selected_constant},
           {"poor_fit", r.poor_fit},
           {"poor_fit_threshold", r.poor_fit_threshold}};
  if (std::isnan(r.predicted_alpha))
    out["predicted_alpha"] = nullptr;
  else
    out["predicted_alpha"] = r.predicted_alpha;
  return out;
}

std::string count_series_csv(const CountSeries& s, const FitReport* fit,
                             const std::string& header) {
  std::string out = header;
  out += "T,N";
  if (fit)
    for (double a : fit->alphas) {
      char buf[48];
      std::snprintf(buf, sizeof buf, ",model_alpha_%g", a);
      out += buf;
    }
  out += "\n";
  for (std::size_t i = 0; i < s.T.size(); ++i) {
    out += fmt_g17(s.T[i]);
    out += ",";
    out += std::to_string(s.N[i]);
    if (fit)
      for (std::size_t k = 0; k < fit->alphas.size(); ++k) {
        double model = fit->constants[k] * std::exp(s.T[i]) *
                       std::pow(s.T[i], -fit->alphas[k]);
        out += ",";
        out += fmt_g17(model);
      }
    out += "\n";
  }
  return out;
}

std::string mixing_series_csv(const MixingSeries& s,
                              const std::string& header) {
  std::string out = header;
  out += "t,estimate,stderr,discards\n";
  for (const auto& p : s.points) {
    out += fmt_g17(p.t);
    out += ",";
    out += fmt_g17(p.estimate);
    out += ",";
    out += fmt_g17(p.stderr_);
    out += ",";
    out += std::to_string(p.discards);
    out += "\n";
  }
  return out;
}

// ---- CLI argument grammars -------------------------------------------------

std::vector<double> parse_grid(const std::string& text) {
  double lo = 0, hi = 0, step = 1;
  char extra = 0;
  int got = std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra);
  if (got != 3) {
    step = 1;
    got = std::sscanf(text.c_str(), "%lf:%lf%c", &lo, &hi, &extra);
    require(got == 2, ErrKind::validation,
            "grid must be lo:hi or lo:hi:step, got \"" + text + "\"");
  }
  require(std::isfinite(lo) && std::isfinite(hi) && std::isfinite(step) &&
              step > 0 && hi >= lo,
          ErrKind::validation, "grid needs hi >= lo and step > 0");
  require((hi - lo) / step <= 1e6, ErrKind::validation, "grid too dense");
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-9 * step; v += step) out.push_back(v);
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      require(used == tok.size() && std::isfinite(v), ErrKind::validation,
              "bad number \"" + tok + "\"");
      out.push_back(v);
    } catch (const std::logic_error&) {
      fail(ErrKind::validation, "bad number \"" + tok + "\"");
    }
  }
  require(!out.empty(), ErrKind::validation, "empty list \"" + text + "\"");
  return out;
}

std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(tok, &used);
      require(used == tok.size(), ErrKind::validation,
              "bad integer \"" + tok + "\"");
      out.push_back(v);
    } catch (const std::logic_error&) {
      fail(ErrKind::validation, "bad integer \"" + tok + "\"");
    }
  }
  require(!out.empty(), ErrKind::validation, "empty list \"" + text + "\"");
  return out;
}

}  // namespace covermix
