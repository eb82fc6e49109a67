#include "qvolterra/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "qvolterra/version.hpp"

namespace qvolterra::cli {
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::kConfigError, (path.empty() ? "/" : path) + ": " + msg);
}

std::size_t count(const Json& j, const std::string& path, std::size_t min = 0) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min)) {
    fail(path, "expected an integer >= " + std::to_string(min));
  }
  return j.get<std::size_t>();
}

double positive(const Json& j, const std::string& path) {
  if (!j.is_number() || !(j.get<double>() > 0.0)) fail(path, "expected a positive number");
  return j.get<double>();
}

std::vector<std::size_t> counts(const Json& j, const std::string& path, std::size_t min) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of integers");
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < j.size(); ++r) out.push_back(count(j[r], path + "/" + std::to_string(r), min));
  return out;
}

template <class F>
auto located(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    fail(path, e.what());
  }
}

FaceIndexSet face_from_json(const Json& j, const std::string& path) {
  if (j.is_object()) {
    if (!j.contains("first")) fail(path, "face object needs 'first'");
    const std::size_t n = count(j["first"], path + "/first", 1);
    return FaceIndexSet::first_n(n);
  }
  if (!j.is_array()) fail(path, "expected an index array or {\"first\": n}");
  std::vector<Index> idx;
  for (std::size_t r = 0; r < j.size(); ++r) idx.push_back(count(j[r], path + "/" + std::to_string(r)));
  return located(path, [&] { return FaceIndexSet(std::move(idx)); });
}

// Point literal or generator: {"uniform": n|[..]}, {"random": n|[..]},
// {"geometric": {"n": .., "ratio": ..}}, {"extreme": i}.
SimplexPoint point_spec(const Json& j, const std::string& path, std::uint64_t seed) {
  if (j.is_array()) return point_from_json(j, path);
  if (!j.is_object() || j.size() != 1) fail(path, "expected a pair list or a single-key generator object");
  const auto& [key, val] = *j.items().begin();
  const std::string p = path + "/" + key;
  auto face_of = [&](const Json& v) {
    return v.is_number_integer() ? FaceIndexSet::first_n(count(v, p, 1)) : face_from_json(v, p);
  };
  if (key == "uniform") return uniform_point(face_of(val));
  if (key == "random") return sample_interior(face_of(val), seed);
  if (key == "extreme") return located(p, [&] { return extreme_point(count(val, p, 1)); });
  if (key == "geometric") {
    if (!val.is_object()) fail(p, "expected {\"n\": .., \"ratio\": ..}");
    if (!val.contains("n")) fail(p + "/n", "missing field");
    if (!val.contains("ratio")) fail(p + "/ratio", "missing field");
    const std::size_t n = count(val["n"], p + "/n", 1);
    const double r = positive(val["ratio"], p + "/ratio");
    return located(p, [&] { return geometric_profile(n, r); });
  }
  fail(p, "unknown point generator");
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

Json report_header(const ScenarioConfig& cfg, const char* command) {
  return Json{{"command", command}, {"version", kVersion}, {"config_hash", config_hash(cfg.source)}};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kConfigError, "cannot write " + path.string());
  f << content;
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

Json support_summary(const SimplexPoint& x) {
  return Json{{"size", x.support_size()}, {"min_index", x.min_index()}, {"max_index", x.max_index()}};
}

std::string svg_plot(const Trajectory& traj, const std::vector<Index>& coords) {
  constexpr double kW = 640.0, kH = 360.0, kPad = 40.0;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  const double last = static_cast<double>(std::max<std::size_t>(traj.steps.back(), 1));
  std::ostringstream os;
  char buf[64];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" viewBox=\"0 0 640 360\">\n"
     << "<rect width=\"640\" height=\"360\" fill=\"white\"/>\n"
     << "<line x1=\"40\" y1=\"320\" x2=\"600\" y2=\"320\" stroke=\"black\"/>\n"
     << "<line x1=\"40\" y1=\"40\" x2=\"40\" y2=\"320\" stroke=\"black\"/>\n"
     << "<text x=\"600\" y=\"340\" font-size=\"12\" text-anchor=\"end\">step " << traj.steps.back() << "</text>\n"
     << "<text x=\"36\" y=\"44\" font-size=\"12\" text-anchor=\"end\">1</text>\n";
  for (std::size_t c = 0; c < coords.size(); ++c) {
    os << "<polyline fill=\"none\" stroke=\"" << kColors[c % 6] << "\" points=\"";
    for (std::size_t p = 0; p < traj.points.size(); ++p) {
      const double x = kPad + (kW - 2 * kPad) * static_cast<double>(traj.steps[p]) / last;
      const double y = (kH - kPad) - (kH - 2 * kPad) * traj.points[p][coords[c]];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x, y);
      os << buf;
    }
    os << "\"/>\n<text x=\"" << 560 << "\" y=\"" << 56 + 14 * c << "\" font-size=\"12\" fill=\"" << kColors[c % 6]
       << "\">x_" << coords[c] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// Runs f(i) for i in [0, n) on a small thread pool.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

const std::vector<std::string>& top_level_keys() {
  static const std::vector<std::string> keys = {"scenario", "operator", "initial", "second", "steps",
                                                "tol",      "window",   "stride",  "seed",   "face",
                                                "emptiness", "study",   "plot"};
  return keys;
}

}  // namespace

std::vector<std::string> scenario_names() { return {"example-5.1", "example-5.2", "shift", "rps", "truncation"}; }

Json scenario_config(const std::string& name) {
  if (name == "example-5.1") {
    return Json{{"scenario", name},
                {"operator", {{"kind", "pair"}, {"coeffs", std::vector<double>(20, 1.0)}}},
                {"initial", {{"uniform", 40}}},
                {"steps", 5000},
                {"tol", 1e-9},
                {"window", 50},
                {"face", {{"first", 40}}},
                {"plot", {{"coords", {1, 2}}}}};
  }
  if (name == "example-5.2") {
    return Json{{"scenario", name},
                {"operator", {{"kind", "alternating"}}},
                {"initial", {{"uniform", 40}}},
                {"steps", 10000},
                {"face", {{"first", 40}}},
                {"emptiness", {5, 20}}};
  }
  if (name == "shift") {
    return Json{{"scenario", name}, {"operator", {{"kind", "shift"}}}, {"initial", {{"extreme", 1}}}, {"steps", 100}};
  }
  if (name == "rps") {
    return Json{{"scenario", name},
                {"operator", {{"kind", "dense"}, {"entries", {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}}}}},
                {"initial", {{1, 0.5}, {2, 0.3}, {3, 0.2}}},
                {"steps", 100000},
                {"stride", 100},
                {"face", {1, 2, 3}},
                {"plot", {{"coords", {1, 2, 3}}}}};
  }
  if (name == "truncation") {
    return Json{{"scenario", name},
                {"study",
                 {{"base", {{"kind", "alternating"}}},
                  {"profile", {{"geometric", {{"n", 2000}, {"ratio", 0.99}}}}},
                  {"m", {1, 2, 3, 4, 5}},
                  {"n", {250, 500, 1000}},
                  {"p", {250, 500, 1000}},
                  {"tails", {{{"kind", "zero"}}, {{"kind", "alternating"}}}},
                  {"tail_n", {50, 500, 1500}},
                  {"converge", {{"m", 5}, {"eps", 1e-6}}}}}};
  }
  throw Error(ErrorCode::kConfigError, "--scenario: unknown scenario '" + name + "'");
}

Json resolve_config(const RunOptions& opts) {
  Json cfg = opts.scenario ? scenario_config(*opts.scenario) : Json::object();
  if (opts.config_path) {
    std::ifstream f(*opts.config_path);
    if (!f) throw Error(ErrorCode::kConfigError, "--config: cannot open " + opts.config_path->string());
    Json patch;
    try {
      patch = Json::parse(f);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kConfigError, "--config: " + std::string(e.what()));
    }
    if (!patch.is_object()) throw Error(ErrorCode::kConfigError, "/: config must be a JSON object");
    cfg.merge_patch(patch);
  }
  if (opts.seed) cfg["seed"] = *opts.seed;
  if (opts.emptiness) cfg["emptiness"] = {opts.emptiness->first, opts.emptiness->second};
  return cfg;
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

ScenarioConfig parse_config(const Json& j) {
  if (!j.is_object()) fail("", "config must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    const auto& keys = top_level_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail("/" + key, "unknown field");
  }
  ScenarioConfig cfg;
  cfg.source = j;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("/seed", "expected an unsigned integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("operator")) cfg.op = operator_from_json(j["operator"], "/operator");
  if (j.contains("initial")) cfg.initial = point_spec(j["initial"], "/initial", cfg.seed);
  if (j.contains("second")) cfg.second = point_spec(j["second"], "/second", cfg.seed + 1);
  if (j.contains("steps")) cfg.steps = count(j["steps"], "/steps", 1);
  if (j.contains("window")) cfg.window = count(j["window"], "/window", 2);
  if (j.contains("stride")) cfg.stride = count(j["stride"], "/stride", 1);
  if (j.contains("tol")) cfg.tol = positive(j["tol"], "/tol");
  if (j.contains("face")) cfg.face = face_from_json(j["face"], "/face");
  if (j.contains("emptiness")) {
    const auto r = counts(j["emptiness"], "/emptiness", 2);
    if (r.size() != 2 || r[0] > r[1]) fail("/emptiness", "expected [from, to] with 2 <= from <= to");
    cfg.emptiness = {r[0], r[1]};
  }
  if (j.contains("plot")) {
    const Json& p = j["plot"];
    if (!p.is_object() || !p.contains("coords")) fail("/plot/coords", "missing field");
    cfg.plot_coords = counts(p["coords"], "/plot/coords", 1);
  }
  if (j.contains("study")) {
    const Json& s = j["study"];
    const std::string sp = "/study";
    if (!s.is_object()) fail(sp, "expected an object");
    ScenarioConfig::Study st;
    if (!s.contains("base")) fail(sp + "/base", "missing field");
    st.base = skew_from_json(s["base"], sp + "/base");
    located(sp + "/base", [&] { require_valid(st.base); });
    if (!s.contains("profile")) fail(sp + "/profile", "missing field");
    st.profile = point_spec(s["profile"], sp + "/profile", cfg.seed);
    if (s.contains("m")) st.m = counts(s["m"], sp + "/m", 1);
    if (s.contains("n")) st.n = counts(s["n"], sp + "/n", 1);
    if (s.contains("p")) st.p = counts(s["p"], sp + "/p", 1);
    if (s.contains("tails")) {
      const Json& t = s["tails"];
      if (!t.is_array() || t.size() != 2) fail(sp + "/tails", "expected exactly two skew specs");
      for (std::size_t r = 0; r < 2; ++r) {
        const std::string tp = sp + "/tails/" + std::to_string(r);
        st.tails.push_back(skew_from_json(t[r], tp));
        located(tp, [&] { require_valid(st.tails.back()); });
      }
      if (!s.contains("tail_n")) fail(sp + "/tail_n", "missing field (required with tails)");
      st.tail_n = counts(s["tail_n"], sp + "/tail_n", 1);
    }
    if (s.contains("converge")) {
      const Json& c = s["converge"];
      if (!c.is_object() || !c.contains("m")) fail(sp + "/converge/m", "missing field");
      st.converge_m = count(c["m"], sp + "/converge/m", 1);
      if (c.contains("eps")) st.converge_eps = positive(c["eps"], sp + "/converge/eps");
    }
    const bool grid = !st.m.empty() || !st.n.empty() || !st.p.empty();
    if (grid && (st.m.empty() || st.n.empty() || st.p.empty())) fail(sp, "grid needs all of m, n, p");
    cfg.study = std::move(st);
  }
  return cfg;
}

int cmd_apply(const ScenarioConfig& cfg, const fs::path& out, std::ostream& log) {
  if (!cfg.op) fail("/operator", "missing field");
  if (!cfg.initial) fail("/initial", "missing field");
  const SimplexPoint& x = *cfg.initial;
  const SimplexPoint image = cfg.op->apply(x);
  const double sum = image.sum();
  Json rep = report_header(cfg, "apply");
  rep["input"] = to_json(x);
  rep["image"] = to_json(image);
  rep["image_sum"] = sum;
  rep["sum_check"] = std::abs(sum - 1.0) <= kNormalizationTol;
  rep["fixed_point_residual"] = l1_distance(image, x);
  if (cfg.op->is_volterra()) {
    const SimplexPoint& y = cfg.second ? *cfg.second : x;
    rep["second"] = to_json(y);
    rep["conjugate"] = to_json(conjugate_apply(cfg.op->spec(), x, y));
  }
  fs::create_directories(out);
  write_json(out / "apply.json", rep);
  log << "apply: image sum " << format_double(sum) << " -> " << (out / "apply.json").string() << "\n";
  return rep["sum_check"].get<bool>() ? kExitOk : kExitViolation;
}

int cmd_iterate(const ScenarioConfig& cfg, const fs::path& out, std::ostream& log) {
  if (!cfg.op) fail("/operator", "missing field");
  if (!cfg.initial) fail("/initial", "missing field");
  const Trajectory traj = iterate(*cfg.op, *cfg.initial, cfg.steps, cfg.stride);
  const ConvergenceVerdict verdict = detect_convergence(traj, cfg.tol, std::min(cfg.window, traj.length()));

  int code = kExitOk;
  Json rep = report_header(cfg, "iterate");
  rep["steps"] = traj.length();
  rep["stride"] = traj.stride;
  rep["verdict"] = to_json(verdict);
  rep["support_lost_at"] = traj.support_lost_at ? Json(*traj.support_lost_at) : Json(nullptr);
  rep["initial_support"] = support_summary(traj.initial());
  rep["final_support"] = support_summary(traj.last());
  if (traj.op.is_volterra()) {
    const GrowthReport g = check_growth_bound(traj);
    rep["growth_bound"] = to_json(g.verdict);
    if (!g.verdict) code = kExitViolation;
    if (verdict.status == ConvergenceVerdict::Status::kConverged) {
      const LimitQReport q = check_limit_in_Q(traj, verdict);
      rep["limit_in_q"] = to_json(q.verdict);
      if (!q.verdict) code = kExitViolation;
    }
  }
  Json sizes = Json::array();
  for (double s : traj.step_sizes) sizes.push_back(s);
  rep["step_sizes"] = std::move(sizes);

  fs::create_directories(out);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  write_file(out / "trajectory.csv", csv.str());
  write_json(out / "diagnostics.json", rep);
  if (!cfg.plot_coords.empty()) write_file(out / "trajectory.svg", svg_plot(traj, cfg.plot_coords));
  log << "iterate: " << traj.length() << " steps, " << to_string(verdict.status) << "\n";
  return code;
}

int cmd_qset(const ScenarioConfig& cfg, const fs::path& out, std::ostream& log) {
  if (!cfg.op && !cfg.emptiness) fail("/operator", "missing field (or give an emptiness range)");
  int code = kExitOk;
  Json rep = report_header(cfg, "qset");
  if (cfg.op) {
    const SkewSpec& spec = located("/operator", [&]() -> const SkewSpec& { return cfg.op->spec(); });
    std::optional<FaceIndexSet> face = cfg.face;
    if (!face && cfg.initial) face = FaceIndexSet::support_of(*cfg.initial);
    if (!face && spec.extent() && *spec.extent() > 0) face = FaceIndexSet::first_n(*spec.extent());
    if (!face) fail("/face", "missing field (needed for this operator kind)");
    const LPResult r = q_set_point(spec, *face);
    rep["face"] = face->indices();
    rep["result"] = to_json(r);
    if (r.feasible()) {
      const double fix = l1_distance(volterra_apply(spec, *r.witness), *r.witness);
      rep["fixed_point_residual"] = fix;
      rep["q_membership_residual"] = q_membership_residual(spec, *r.witness);
      if (fix > kQTol) code = kExitViolation;
    }
    log << "qset: face of size " << face->size() << ", " << (r.feasible() ? "Feasible" : "Infeasible") << "\n";
  }
  if (cfg.emptiness) {
    Json rows = Json::array();
    bool all = true;
    for (std::size_t n = cfg.emptiness->first; n <= cfg.emptiness->second; ++n) {
      const EmptinessReport e = example52_emptiness(n);
      all = all && e.verdict.ok;
      rows.push_back(Json{{"n", n},
                          {"status", e.lp.feasible() ? "Feasible" : "Infeasible"},
                          {"phase_one_objective", e.lp.phase_one_objective}});
    }
    rep["emptiness"] = std::move(rows);
    rep["emptiness_certified"] = all;
    if (!all) code = kExitViolation;
    log << "qset: emptiness " << cfg.emptiness->first << ".." << cfg.emptiness->second << ": "
        << (all ? "all infeasible" : "FEASIBLE CASE FOUND") << "\n";
  }
  fs::create_directories(out);
  write_json(out / "qset.json", rep);
  return code;
}

int cmd_truncation_study(const ScenarioConfig& cfg, const fs::path& out, std::ostream& log) {
  if (!cfg.study) fail("/study", "missing field");
  const auto& st = *cfg.study;
  const SimplexPoint& x = *st.profile;
  int code = kExitOk;
  Json rep = report_header(cfg, "truncation-study");

  struct Cell {
    std::size_t m, n, p;
  };
  std::vector<Cell> cells;
  for (auto m : st.m)
    for (auto n : st.n)
      for (auto p : st.p) cells.push_back({m, n, p});
  std::size_t needed = 1;
  for (const auto& c : cells) needed = std::max(needed, c.n + c.p);
  std::vector<GapReport> reports(cells.size());
  if (!cells.empty()) {
    const DenseSkew truncated = truncate_dense(st.base, needed);
    parallel_for(cells.size(), [&](std::size_t i) {
      reports[i] = power_truncation_gap(truncated, x, cells[i].m, cells[i].n, cells[i].p);
    });
  }
  std::ostringstream csv;
  write_gap_csv_header(csv);
  double max_ratio = 0.0;
  std::size_t violations = 0;
  for (const auto& r : reports) {
    write_gap_rows(csv, r);
    max_ratio = std::max(max_ratio, r.max_ratio);
    if (!r.verdict) ++violations;
  }
  rep["cells"] = cells.size();
  rep["max_gap_over_bound"] = max_ratio;
  rep["violations"] = violations;
  if (violations > 0) code = kExitViolation;

  if (!st.tails.empty()) {
    const CompatibleFamily fam(st.base, st.tails[0]);
    Json rows = Json::array();
    for (std::size_t n : st.tail_n) {
      const WEqualsVReport w = check_w_equals_v(fam, x, n, st.tails[1]);
      rows.push_back(Json{{"n", n},
                          {"tail_mass", w.tail},
                          {"ratio_tail_0", w.family_tail.max_ratio},
                          {"ratio_tail_1", w.alternate_tail.max_ratio},
                          {"verdict", to_json(w.verdict)}});
      if (!w.verdict) code = kExitViolation;
    }
    rep["w_equals_v"] = std::move(rows);
  }
  if (st.converge_m) {
    const CompatibleFamily fam(st.base);
    const PowerApproximation a = converge_power(fam, x, *st.converge_m, st.converge_eps);
    rep["converge_power"] = Json{{"m", *st.converge_m},
                                 {"eps", st.converge_eps},
                                 {"n", a.n},
                                 {"bound", a.bound},
                                 {"exact", a.exact}};
  }
  fs::create_directories(out);
  write_file(out / "gaps.csv", csv.str());
  write_json(out / "summary.json", rep);
  log << "truncation-study: " << cells.size() << " cells, max gap/bound " << format_double(max_ratio) << "\n";
  return code;
}

int run(const std::string& command, const RunOptions& opts, std::ostream& log, std::ostream& err) {
  try {
    const ScenarioConfig cfg = parse_config(resolve_config(opts));
    if (command == "apply") return cmd_apply(cfg, opts.out_dir, log);
    if (command == "iterate") return cmd_iterate(cfg, opts.out_dir, log);
    if (command == "qset") return cmd_qset(cfg, opts.out_dir, log);
    if (command == "truncation-study") return cmd_truncation_study(cfg, opts.out_dir, log);
    err << "unknown command '" << command << "'\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace qvolterra::cli
