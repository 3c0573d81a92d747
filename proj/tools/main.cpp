#include <pthread.h>

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "flatfix/checker.hpp"
#include "flatfix/imp.hpp"
#include "flatfix/json_io.hpp"
#include "flatfix/kleene.hpp"

namespace {

using namespace flatfix;

// 0 = value / all checks pass, 1 = fault, 2 = no result within fuel/guard,
// 3 = a check failed.
constexpr int kExitValue = 0;
constexpr int kExitFault = 1;
constexpr int kExitBottom = 2;
constexpr int kExitCheckFail = 3;

std::string read_input(const std::string& input, bool inline_text) {
    if (inline_text) return input;
    std::ifstream in(input, std::ios::binary);
    if (!in) throw Error("cannot open file '" + input + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IllFormed(std::string(what) + ": malformed JSON");
    return j;
}

struct Common {
    std::string input;
    bool inline_text = false;
    std::size_t fuel = 10000;
    std::string format = "human";

    bool json_mode() const { return format == "json"; }
};

void emit(const json& doc, bool json_mode, const std::string& human) {
    if (json_mode) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << human << "\n";
    }
}

int cmd_run(const Common& common, const std::string& state_text) {
    imp::ComPtr program = imp::parse(read_input(common.input, common.inline_text));
    imp::State initial = state_from_json(parse_json(state_text, "state"));
    Partial<imp::State> result = imp::denot_run(program, std::move(initial), common.fuel);
    if (result.is_bottom()) {
        emit(json(nullptr), common.json_mode(), "no result within fuel " + std::to_string(common.fuel));
        return kExitBottom;
    }
    json doc = state_to_json(result.get());
    emit(doc, common.json_mode(), doc.dump());
    return kExitValue;
}

int cmd_trace(const Common& common, Int x) {
    ExprPtr e = expr_from_json(parse_json(read_input(common.input, common.inline_text), "expression"));
    IterTrace t = trace(e, common.fuel, x);
    json doc = trace_to_json(t);
    if (common.json_mode()) {
        emit(doc, true, "");
        return kExitValue;
    }
    std::ostringstream os;
    os << "input: " << t.input << "\n";
    for (std::size_t n = 0; n < t.samples.size(); ++n) {
        os << "n=" << n << ": " << t.samples[n] << "\n";
    }
    os << "stabilized_at: " << (t.stabilized_at ? std::to_string(*t.stabilized_at) : "none");
    emit(doc, false, os.str());
    return kExitValue;
}

int cmd_fix(const Common& common, Int x, std::size_t guard) {
    ExprPtr e = expr_from_json(parse_json(read_input(common.input, common.inline_text), "expression"));
    FixOutcome outcome = fix(e, common.fuel, x);

    // The unbounded realization is run alongside as a cross-check; the guard
    // converts a potential loop into a reported cut-off.
    json realization;
    std::string realization_line;
    try {
        Partial<Int> r = run_unbounded(e, x, guard);
        realization = json{{"result", r.is_bottom() ? json(nullptr) : json(r.get())},
                           {"guard_exceeded", false}};
        realization_line = r.is_bottom() ? "bottom" : std::to_string(r.get());
    } catch (const GuardExceeded&) {
        realization = json{{"result", nullptr}, {"guard_exceeded", true}};
        realization_line = "guard exceeded at depth " + std::to_string(guard);
    }

    json doc{{"result", outcome.result.is_bottom() ? json(nullptr) : json(outcome.result.get())},
             {"witness", outcome.witness ? json(*outcome.witness) : json(nullptr)},
             {"realization", realization}};
    std::ostringstream os;
    if (outcome.result.is_value()) {
        os << "result: " << outcome.result.get() << "\n"
           << "witness: " << *outcome.witness << " iteration(s)\n";
    } else {
        os << "no result within fuel " << common.fuel << "\n";
    }
    os << "realization (guard " << guard << "): " << realization_line;
    emit(doc, common.json_mode(), os.str());
    return outcome.result.is_value() ? kExitValue : kExitBottom;
}

std::pair<Int, Int> parse_clip_range(const std::string& clip) {
    const auto sep = clip.find("..");
    if (sep == std::string::npos) throw IllFormed("clip: expected 'lo..hi'");
    try {
        Int lo = std::stoll(clip.substr(0, sep));
        Int hi = std::stoll(clip.substr(sep + 2));
        if (lo > hi) throw IllFormed("clip: empty range");
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw IllFormed("clip: expected 'lo..hi'");
    } catch (const std::out_of_range&) {
        throw IllFormed("clip: bounds out of range");
    }
}

int cmd_check(const Common& common, const std::string& graph_path, const std::vector<Int>& domain,
              const std::string& clip) {
    FiniteFunSpace<Int, Int> space({0}, {0});
    TableFn fn;
    if (!graph_path.empty()) {
        FunctionalGraph graph = graph_from_json(parse_json(read_input(graph_path, false), "graph"));
        space = std::move(graph.space);
        fn = std::move(graph.fn);
    } else {
        if (common.input.empty()) throw IllFormed("check: provide --expr or --graph");
        if (domain.empty()) throw IllFormed("check: --domain is required with --expr");
        ExprPtr e = expr_from_json(parse_json(read_input(common.input, common.inline_text), "expression"));
        auto [lo, hi] = parse_clip_range(clip);
        std::vector<Int> codomain;
        for (Int v = lo; v <= hi; ++v) codomain.push_back(v);
        space = FiniteFunSpace<Int, Int>(domain, codomain);
        fn = to_table_functional(e, domain, [lo = lo, hi = hi](Int v) { return lo <= v && v <= hi; });
    }

    CheckReport<Int, Int> monotone = check_monotone(fn, space);
    CheckReport<Int, Int> continuous = check_continuous(fn, space);
    CheckReport<Int, Int> chain = iterates_are_chain(fn, space, space.domain().size() + 2);
    CheckReport<Int, Int> tarski = check_tarski(fn, space, space.size());
    LfpResult<Int, Int> lfp = least_fixpoint_bruteforce(fn, space);

    const bool all_pass = monotone.pass && continuous.pass && chain.pass && tarski.pass;
    json doc{{"monotone", report_to_json(monotone)},
             {"continuous", report_to_json(continuous)},
             {"iterates_chain", report_to_json(chain)},
             {"tarski", report_to_json(tarski)},
             {"least_fixpoint", lfp_to_json(lfp)},
             {"verdict", all_pass ? "pass" : "fail"}};

    std::ostringstream os;
    auto line = [&os](const char* name, const CheckReport<Int, Int>& r) {
        os << name << ": " << (r.pass ? "pass" : "fail");
        if (!r.pass) os << " (" << r.detail << ")";
        os << "\n";
    };
    line("monotone", monotone);
    line("continuous", continuous);
    line("iterates_chain", chain);
    line("tarski", tarski);
    os << "least_fixpoint: ";
    switch (lfp.status) {
        case LfpStatus::Found: os << "found " << table_to_json(*lfp.table).dump() << "\n"; break;
        case LfpStatus::NoFixpoint: os << "no fixpoint\n"; break;
        case LfpStatus::NoLeast: os << "no least fixpoint\n"; break;
    }
    os << "verdict: " << (all_pass ? "pass" : "fail");
    emit(doc, common.json_mode(), os.str());
    return all_pass ? kExitValue : kExitCheckFail;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"flatfix: bounded least-fixpoint computation over lifted flat domains"};
    app.require_subcommand(1);

    Common common;
    std::string state_text = "{}";
    Int x = 0;
    std::size_t guard = 100000;
    std::string graph_path;
    std::vector<Int> domain;
    std::string clip;

    auto add_common = [&](CLI::App* sub, bool with_input) {
        if (with_input) {
            sub->add_option("input", common.input, "input file (or literal text with --inline)")->required();
            sub->add_flag("--inline", common.inline_text, "treat the input argument as literal text");
        }
        sub->add_option("--fuel", common.fuel, "iteration bound")->capture_default_str();
        sub->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"human", "json"}))
            ->capture_default_str();
    };

    CLI::App* run = app.add_subcommand("run", "run a program against an initial state");
    add_common(run, true);
    run->add_option("--state", state_text, "initial state as a JSON object")->capture_default_str();

    CLI::App* tr = app.add_subcommand("trace", "record the iterate chain at one input");
    add_common(tr, true);
    tr->add_option("x", x, "input value")->required();

    CLI::App* fx = app.add_subcommand("fix", "compute the fixpoint value at one input, with witness");
    add_common(fx, true);
    fx->add_option("x", x, "input value")->required();
    fx->add_option("--guard", guard, "recursion depth guard for the unbounded realization")
        ->capture_default_str();

    CLI::App* ck = app.add_subcommand("check", "brute-force order-theoretic checks on a functional");
    ck->add_option("--expr", common.input, "expression file (or literal JSON with --inline)");
    ck->add_flag("--inline", common.inline_text, "treat --expr as literal JSON");
    ck->add_option("--graph", graph_path, "functional given extensionally as a graph file");
    ck->add_option("--domain", domain, "finite domain elements")->delimiter(',');
    ck->add_option("--clip", clip, "codomain range lo..hi");
    ck->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"human", "json"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) return cmd_run(common, state_text);
        if (tr->parsed()) return cmd_trace(common, x);
        if (fx->parsed()) return cmd_fix(common, x, guard);
        if (ck->parsed()) return cmd_check(common, graph_path, domain, clip);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFault;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFault;
    }
    return kExitFault;
}

struct ThreadCtx {
    std::function<int()> fn;
    int result = kExitFault;
};

void* thread_entry(void* arg) {
    auto* ctx = static_cast<ThreadCtx*>(arg);
    ctx->result = ctx->fn();
    return nullptr;
}

// Deep recursion guards (run_unbounded, tall derivations) want more stack
// than some environments give the main thread.
int run_on_big_stack(std::function<int()> fn) {
    ThreadCtx ctx{std::move(fn), kExitFault};
    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, 512ull * 1024 * 1024);
    pthread_t thread;
    if (pthread_create(&thread, &attr, thread_entry, &ctx) != 0) {
        ctx.result = ctx.fn();
    } else {
        pthread_join(thread, nullptr);
    }
    pthread_attr_destroy(&attr);
    return ctx.result;
}

}  // namespace

int main(int argc, char** argv) {
    return run_on_big_stack([&] { return dispatch(argc, argv); });
}
