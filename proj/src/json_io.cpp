#include "flatfix/json_io.hpp"

#include <unordered_map>
#include <utility>
#include <vector>

namespace flatfix {

namespace {

const char* op_symbol(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Eq: return "=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
    }
    throw IllFormed("unknown operator");
}

Int int_from_json(const json& j, const char* what) {
    if (!j.is_number_integer()) throw IllFormed(std::string(what) + ": expected an integer");
    return j.get<Int>();
}

}  // namespace

json expr_to_json(const ExprPtr& e) {
    if (!e) throw IllFormed("expr_to_json: null expression");
    switch (e->kind()) {
        case FunExpr::Kind::Lit: return json::array({"lit", e->lit_value()});
        case FunExpr::Kind::Input: return json::array({"input"});
        case FunExpr::Kind::Bin:
            return json::array({op_symbol(e->op()), expr_to_json(e->left()), expr_to_json(e->right())});
        case FunExpr::Kind::If:
            return json::array({"if", expr_to_json(e->cond()), expr_to_json(e->then_branch()),
                                expr_to_json(e->else_branch())});
        case FunExpr::Kind::Rec: return json::array({"rec", expr_to_json(e->rec_arg())});
    }
    throw IllFormed("expr_to_json: unknown node kind");
}

ExprPtr expr_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_string()) {
        throw IllFormed("expression: expected a [\"tag\", ...] array");
    }
    const std::string tag = j[0].get<std::string>();
    auto arity = [&](std::size_t n) {
        if (j.size() != n) {
            throw IllFormed("expression: '" + tag + "' takes " + std::to_string(n - 1) + " argument(s)");
        }
    };
    if (tag == "lit") {
        arity(2);
        return lit(int_from_json(j[1], "lit"));
    }
    if (tag == "input") {
        arity(1);
        return input();
    }
    if (tag == "rec") {
        arity(2);
        return rec(expr_from_json(j[1]));
    }
    if (tag == "if") {
        arity(4);
        return if_then_else(expr_from_json(j[1]), expr_from_json(j[2]), expr_from_json(j[3]));
    }
    static const std::unordered_map<std::string, BinOp> ops = {
        {"+", BinOp::Add}, {"-", BinOp::Sub}, {"*", BinOp::Mul},
        {"=", BinOp::Eq},  {"<", BinOp::Lt}, {"<=", BinOp::Le},
    };
    auto it = ops.find(tag);
    if (it == ops.end()) throw IllFormed("expression: unknown tag '" + tag + "'");
    arity(3);
    return bin(it->second, expr_from_json(j[1]), expr_from_json(j[2]));
}

json table_to_json(const Table& t) {
    json entries = json::object();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Int a = t.domain()[i];
        entries[std::to_string(a)] = t.entry(i).is_bottom() ? json(nullptr) : json(t.entry(i).get());
    }
    return json{{"domain", t.domain()}, {"entries", std::move(entries)}};
}

Table table_from_json(const json& j) {
    if (!j.is_object() || !j.contains("domain") || !j.contains("entries")) {
        throw IllFormed("table: expected {\"domain\": [...], \"entries\": {...}}");
    }
    if (!j["domain"].is_array()) throw IllFormed("table: domain must be an array");
    std::vector<Int> domain;
    for (const json& d : j["domain"]) domain.push_back(int_from_json(d, "table domain"));
    Table t(domain);
    const json& entries = j["entries"];
    if (!entries.is_object()) throw IllFormed("table: entries must be an object");
    if (entries.size() != domain.size()) throw IllFormed("table: entries must cover the domain exactly");
    for (Int a : domain) {
        const std::string key = std::to_string(a);
        if (!entries.contains(key)) throw IllFormed("table: missing entry for domain element " + key);
        const json& v = entries[key];
        if (!v.is_null()) t.set(a, Partial<Int>::value(int_from_json(v, "table entry")));
    }
    return t;
}

json trace_to_json(const IterTrace& t) {
    json samples = json::array();
    for (const auto& s : t.samples) {
        samples.push_back(s.is_bottom() ? json(nullptr) : json(s.get()));
    }
    json stabilized = t.stabilized_at ? json(*t.stabilized_at) : json(nullptr);
    return json{{"input", t.input}, {"samples", std::move(samples)}, {"stabilized_at", std::move(stabilized)}};
}

json report_to_json(const CheckReport<Int, Int>& r) {
    json j{{"verdict", r.pass ? "pass" : "fail"}};
    if (!r.pass) {
        j["detail"] = r.detail;
        json ce = json::object();
        if (r.pair) {
            ce["f"] = table_to_json(r.pair->first);
            ce["g"] = table_to_json(r.pair->second);
        }
        if (r.input) ce["input"] = *r.input;
        j["counterexample"] = ce.empty() ? json(nullptr) : std::move(ce);
    }
    return j;
}

json lfp_to_json(const LfpResult<Int, Int>& r) {
    switch (r.status) {
        case LfpStatus::Found: return json{{"status", "found"}, {"table", table_to_json(*r.table)}};
        case LfpStatus::NoFixpoint: return json{{"status", "no_fixpoint"}};
        case LfpStatus::NoLeast: return json{{"status", "no_least"}};
    }
    throw IllFormed("unknown least-fixpoint status");
}

json state_to_json(const imp::State& s) {
    json j = json::object();
    for (const auto& [name, v] : s.vars()) j[name] = v;
    return j;
}

imp::State state_from_json(const json& j) {
    if (!j.is_object()) throw IllFormed("state: expected a JSON object");
    imp::State s;
    for (const auto& [name, v] : j.items()) {
        if (!imp::valid_identifier(name)) throw IllFormed("state: invalid identifier '" + name + "'");
        s.set(name, int_from_json(v, "state value"));
    }
    return s;
}

json partial_state_to_json(const Partial<imp::State>& p) {
    return p.is_bottom() ? json(nullptr) : state_to_json(p.get());
}

FunctionalGraph graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("domain") || !j.contains("codomain") || !j.contains("graph")) {
        throw IllFormed("graph: expected {\"domain\", \"codomain\", \"graph\"}");
    }
    std::vector<Int> domain, codomain;
    for (const json& d : j["domain"]) domain.push_back(int_from_json(d, "graph domain"));
    for (const json& c : j["codomain"]) codomain.push_back(int_from_json(c, "graph codomain"));
    FiniteFunSpace<Int, Int> space(std::move(domain), std::move(codomain));

    if (!j["graph"].is_array()) throw IllFormed("graph: 'graph' must be an array of {from, to} pairs");
    std::vector<std::optional<Table>> images(space.size());
    for (const json& pair : j["graph"]) {
        if (!pair.is_object() || !pair.contains("from") || !pair.contains("to")) {
            throw IllFormed("graph: each pair needs 'from' and 'to' tables");
        }
        Table from = table_from_json(pair["from"]);
        Table to = table_from_json(pair["to"]);
        auto idx = space.index_of(from);
        if (!idx) throw IllFormed("graph: 'from' table is not an element of the declared space");
        if (to.domain() != space.domain()) throw IllFormed("graph: 'to' table has the wrong domain");
        if (images[*idx]) throw IllFormed("graph: duplicate 'from' table");
        images[*idx] = std::move(to);
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (!images[i]) {
            throw IncompleteGraph("graph misses space element " +
                                  table_to_json(space.element(i)).dump());
        }
    }

    auto table = std::make_shared<std::vector<Table>>();
    table->reserve(space.size());
    for (auto& img : images) table->push_back(std::move(*img));
    auto space_copy = std::make_shared<FiniteFunSpace<Int, Int>>(space);
    TableFn fn = [table, space_copy](const Table& f) {
        auto idx = space_copy->index_of(f);
        if (!idx) throw IllFormed("graph functional applied outside its space");
        return (*table)[*idx];
    };
    return FunctionalGraph{std::move(space), std::move(fn)};
}

}  // namespace flatfix
