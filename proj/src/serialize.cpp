#include "qvolterra/serialize.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace qvolterra {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::kConfigError, (path.empty() ? "/" : path) + ": " + msg);
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::vector<std::vector<double>> matrix(const Json& j, const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < array(j, path).size(); ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    std::vector<double> row;
    for (std::size_t c = 0; c < array(j[r], rp).size(); ++c) row.push_back(number(j[r][c], rp + "/" + std::to_string(c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Re-throws domain errors as config errors located at `path`.
template <class F>
auto located(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    fail(path, e.what());
  }
}

Json dense_rows(const DenseSkew& d) {
  Json rows = Json::array();
  for (Index k = 1; k <= d.n; ++k) {
    Json row = Json::array();
    for (Index i = 1; i <= d.n; ++i) row.push_back(d(k, i));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json to_json(const SimplexPoint& x) {
  Json out = Json::array();
  for (const auto& e : x.entries()) out.push_back(Json::array({e.index, e.weight}));
  return out;
}

SimplexPoint point_from_json(const Json& j, const std::string& path) {
  std::vector<std::pair<Index, double>> pairs;
  for (std::size_t r = 0; r < array(j, path).size(); ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != 2) fail(rp, "expected an [index, weight] pair");
    pairs.emplace_back(count(j[r][0], rp + "/0"), number(j[r][1], rp + "/1"));
  }
  return located(path, [&] { return make_point(pairs); });
}

Json to_json(const SkewSpec& spec) {
  Json out{{"kind", kind_name(spec.kind())}};
  switch (spec.kind()) {
    case SkewSpec::Kind::kDense:
      out["entries"] = dense_rows(spec.as_dense());
      break;
    case SkewSpec::Kind::kBlockDiagonal: {
      Json blocks = Json::array();
      for (const auto& b : std::get<BlockSkew>(spec.repr()).blocks) blocks.push_back(dense_rows(b));
      out["blocks"] = std::move(blocks);
      break;
    }
    case SkewSpec::Kind::kPairSequence:
      out["coeffs"] = std::get<PairSkew>(spec.repr()).coeffs;
      break;
    default:
      break;
  }
  return out;
}

SkewSpec skew_from_json(const Json& j, const std::string& path) {
  const Json& kind_j = field(j, "kind", path);
  if (!kind_j.is_string()) fail(path + "/kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "zero") return SkewSpec::zero();
  if (kind == "alternating") return SkewSpec::alternating_sign();
  if (kind == "dense") {
    const std::string p = path + "/entries";
    auto rows = matrix(field(j, "entries", path), p);
    return located(p, [&] { return SkewSpec::dense(rows); });
  }
  if (kind == "block") {
    const std::string p = path + "/blocks";
    const Json& blocks = array(field(j, "blocks", path), p);
    std::vector<SkewSpec> specs;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const std::string bp = p + "/" + std::to_string(b);
      auto rows = matrix(blocks[b], bp);
      specs.push_back(located(bp, [&] { return SkewSpec::dense(rows); }));
    }
    return located(p, [&] { return SkewSpec::block_diagonal(specs); });
  }
  if (kind == "pair") {
    const std::string p = path + "/coeffs";
    const Json& c = array(field(j, "coeffs", path), p);
    std::vector<double> coeffs;
    for (std::size_t r = 0; r < c.size(); ++r) coeffs.push_back(number(c[r], p + "/" + std::to_string(r)));
    return located(p, [&] { return SkewSpec::pair_sequence(coeffs); });
  }
  fail(path + "/kind", "unknown skew kind '" + kind + "'");
}

Json to_json(const DeterminingTensor& t) {
  Json entries = Json::array();
  const std::size_t n = t.dim();
  for (Index i = 1; i <= n; ++i) {
    for (Index j = i; j <= n; ++j) {
      for (Index k = 1; k <= n; ++k) {
        if (t(i, j, k) != 0.0) entries.push_back(Json::array({i, j, k, t(i, j, k)}));
      }
    }
  }
  return Json{{"kind", "tensor"}, {"dim", n}, {"entries", std::move(entries)}};
}

DeterminingTensor tensor_from_json(const Json& j, const std::string& path) {
  const std::size_t n = count(field(j, "dim", path), path + "/dim");
  if (n == 0 || n > 512) fail(path + "/dim", "tensor dimension must lie in 1..512");
  const std::string p = path + "/entries";
  const Json& entries = array(field(j, "entries", path), p);
  std::vector<double> values(n * n * n, 0.0);
  for (std::size_t r = 0; r < entries.size(); ++r) {
    const std::string rp = p + "/" + std::to_string(r);
    if (!entries[r].is_array() || entries[r].size() != 4) fail(rp, "expected [i, j, k, p]");
    const std::size_t i = count(entries[r][0], rp + "/0");
    const std::size_t jj = count(entries[r][1], rp + "/1");
    const std::size_t k = count(entries[r][2], rp + "/2");
    if (i < 1 || i > n || jj < 1 || jj > n || k < 1 || k > n) fail(rp, "index outside 1..dim");
    const double v = number(entries[r][3], rp + "/3");
    values[((i - 1) * n + (jj - 1)) * n + (k - 1)] = v;
    values[((jj - 1) * n + (i - 1)) * n + (k - 1)] = v;
  }
  return located(p, [&] { return DeterminingTensor::from_values(n, std::move(values)); });
}

OperatorHandle operator_from_json(const Json& j, const std::string& path) {
  const Json& kind_j = field(j, "kind", path);
  if (!kind_j.is_string()) fail(path + "/kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  std::size_t max_support = std::numeric_limits<std::size_t>::max();
  if (j.contains("max_support")) max_support = count(j["max_support"], path + "/max_support");
  if (kind == "shift") return OperatorHandle::shift();
  if (kind == "tensor") {
    auto t = tensor_from_json(j, path);
    return located(path, [&] { return OperatorHandle::tensor(std::move(t), max_support); });
  }
  if (kind == "linear") {
    const std::string p = path + "/stochastic";
    auto rows = matrix(field(j, "stochastic", path), p);
    auto t = located(p, [&] { return linear_induced_tensor(rows); });
    return located(path, [&] { return OperatorHandle::tensor(std::move(t), max_support); });
  }
  SkewSpec spec = skew_from_json(j, path);
  return located(path, [&] { return OperatorHandle::volterra(std::move(spec)); });
}

Json to_json(const LPProblem& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows) {
    rows.push_back(Json{{"coeffs", r.coeffs},
                        {"sense", r.sense == Sense::kLessEqual ? "<=" : ">="},
                        {"rhs", r.rhs}});
  }
  return Json{{"face", p.face.indices()}, {"rows", std::move(rows)}};
}

Json to_json(const LPResult& r) {
  Json out{{"status", r.feasible() ? "Feasible" : "Infeasible"},
           {"iterations", r.iterations},
           {"phase_one_objective", r.phase_one_objective}};
  if (r.witness) out["witness"] = to_json(*r.witness);
  return out;
}

Json to_json(const ConvergenceVerdict& v) {
  Json out{{"status", to_string(v.status)}, {"window", v.window}, {"tol", v.tol}};
  if (v.status == ConvergenceVerdict::Status::kConverged) out["at_step"] = v.at_step;
  if (v.limit) out["limit"] = to_json(*v.limit);
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

Json to_json(const Verdict& v) {
  Json out{{"ok", v.ok}};
  if (!v.ok) out["code"] = std::string(to_string(v.code));
  if (!v.detail.empty()) out["detail"] = v.detail;
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "step,index,weight\n";
  for (std::size_t p = 0; p < traj.points.size(); ++p) {
    for (const auto& e : traj.points[p].entries()) {
      os << traj.steps[p] << ',' << e.index << ',' << format_double(e.weight) << '\n';
    }
  }
}

void write_gap_csv_header(std::ostream& os) { os << "m,n,p,k,gap,bound\n"; }

void write_gap_rows(std::ostream& os, const GapReport& rep) {
  for (const auto& r : rep.rows) {
    os << rep.m << ',' << rep.n << ',' << rep.p << ',' << r.k << ',' << format_double(r.gap) << ','
       << format_double(r.bound) << '\n';
  }
}

}  // namespace qvolterra
