#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qvolterra/dynamics.hpp"
#include "qvolterra/extension.hpp"
#include "qvolterra/lp.hpp"
#include "qvolterra/operator.hpp"
#include "qvolterra/skew.hpp"

namespace qvolterra {

using Json = nlohmann::json;

// Parsing helpers throw Error(kConfigError) whose message starts with the
// JSON pointer of the offending value, e.g. "/operator/entries/1/0: ...".

// [[index, weight], ...] with ascending indices.
Json to_json(const SimplexPoint& x);
SimplexPoint point_from_json(const Json& j, const std::string& path = "");

// {"kind": "zero" | "dense" | "block" | "pair" | "alternating", ...}.
Json to_json(const SkewSpec& spec);
SkewSpec skew_from_json(const Json& j, const std::string& path = "");

// {"kind": "tensor", "dim": n, "entries": [[i, j, k, p], ...]}; unlisted
// entries are 0 and (j, i, k) mirrors (i, j, k).
Json to_json(const DeterminingTensor& t);
DeterminingTensor tensor_from_json(const Json& j, const std::string& path = "");

// Skew kinds, {"kind": "shift"}, {"kind": "tensor", ...} or
// {"kind": "linear", "stochastic": [[...]]}; optional "max_support".
OperatorHandle operator_from_json(const Json& j, const std::string& path = "");

Json to_json(const LPProblem& p);
Json to_json(const LPResult& r);
Json to_json(const ConvergenceVerdict& v);
Json to_json(const Verdict& v);

// Sparse rows "step,index,weight".
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
// "m,n,p,k,gap,bound".
void write_gap_csv_header(std::ostream& os);
void write_gap_rows(std::ostream& os, const GapReport& rep);

// Shortest representation that round-trips.
std::string format_double(double v);

}  // namespace qvolterra
