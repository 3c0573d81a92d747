#pragma once

#include <json.hpp>

#include "flatfix/checker.hpp"
#include "flatfix/expr.hpp"
#include "flatfix/imp.hpp"
#include "flatfix/kleene.hpp"

// JSON wire formats. All parsers throw IllFormed (or IncompleteGraph) with a
// message on malformed documents; serializers round-trip bit-exactly.
namespace flatfix {

using json = nlohmann::json;

// FunExpr uses an S-expression encoding, e.g.
//   ["if", ["=", ["input"], ["lit", 0]], ["lit", 1],
//          ["*", ["input"], ["rec", ["-", ["input"], ["lit", 1]]]]]
json expr_to_json(const ExprPtr& e);
ExprPtr expr_from_json(const json& j);

// {"domain": [0, 1], "entries": {"0": null, "1": 5}}  -- null encodes Bottom
json table_to_json(const Table& t);
Table table_from_json(const json& j);

// {"input": 2, "samples": [null, null, 2], "stabilized_at": 2 | null}
json trace_to_json(const IterTrace& t);

json report_to_json(const CheckReport<Int, Int>& r);
json lfp_to_json(const LfpResult<Int, Int>& r);

// {"n": 5, "acc": 120}; Bottom serializes as null.
json state_to_json(const imp::State& s);
imp::State state_from_json(const json& j);
json partial_state_to_json(const Partial<imp::State>& p);

// A functional given extensionally as a graph over a declared finite space:
//   {"domain": [...], "codomain": [...],
//    "graph": [{"from": <table>, "to": <table>}, ...]}
// The graph must cover every space element (IncompleteGraph otherwise).
struct FunctionalGraph {
    FiniteFunSpace<Int, Int> space;
    TableFn fn;
};
FunctionalGraph graph_from_json(const json& j);

}  // namespace flatfix
