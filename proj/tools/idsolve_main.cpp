// idsolve: exact solvers and instance generators for Locating-Dominating Set
// and Test Cover. Machine-readable results go to stdout with capital prefix
// keys; diagnostics go to stderr.
//
// Exit codes: 0 = YES/solved, 1 = NO/invalid, 2 = usage error, 3 = format error.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "idsolve/io.hpp"
#include "idsolve/kernel.hpp"
#include "idsolve/oracles.hpp"
#include "idsolve/partition_solver.hpp"
#include "idsolve/reductions.hpp"
#include "idsolve/tree_decomposition.hpp"
#include "idsolve/tw_solver.hpp"

using namespace idsolve;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;

struct SolveArgs {
    std::string problem;
    std::string algo = "brute";
    std::string input;
    std::string td_path;
    int k = -1;
    bool witness = false;
    std::uint64_t seed = 0;
    int cap_vertices = 16;
    int cap_tests = 20;
    int cap_universe = 10;
    double timeout = 0;
};

void print_witness(const std::vector<int>& ids) {
    std::cout << "WITNESS";
    for (int v : ids) std::cout << " " << v + 1;
    std::cout << "\n";
}

NiceTreeDecomposition decomposition_for(const Graph& g, const std::string& td_path) {
    TreeDecomposition td;
    if (!td_path.empty()) {
        td = read_td_file(td_path);
        TdReport rep = validate_td(g, td);
        if (!rep.ok()) throw std::runtime_error("supplied .td is invalid: " + rep.message);
    } else {
        td = heuristic_td(g, EliminationStrategy::MinFill);
    }
    return make_nice(g, td);
}

int run_solve_lds(const SolveArgs& args) {
    Graph g = read_gr_file(args.input);
    OracleCaps caps;
    caps.lds_vertices = args.cap_vertices;

    std::optional<int> opt;
    std::vector<int> witness;
    std::uint64_t states = 0;
    if (args.algo == "brute") {
        auto sol = brute_force_lds(g, args.k >= 0 ? args.k : g.vertex_count(), caps);
        if (sol) {
            opt = static_cast<int>(sol->size());
            witness = *sol;
        }
    } else if (args.algo == "tw") {
        TwOptions opts;
        opts.budget = args.k;
        opts.witness = args.witness;
        opts.timeout_seconds = args.timeout;
        TwOutcome out = solve_lds_tw(g, decomposition_for(g, args.td_path), opts);
        states = out.states_total;
        if (out.status == TwStatus::Found) {
            opt = out.optimum;
            witness = out.witness;
        }
    } else if (args.algo == "kernel") {
        if (args.k >= 0) {
            auto sol = lds_solve_by_enumeration(g, args.k);
            if (sol) {
                opt = static_cast<int>(sol->size());
                witness = *sol;
            }
        } else {
            for (int k = 0; k <= g.vertex_count(); ++k) {
                auto sol = lds_solve_by_enumeration(g, k);
                if (sol) {
                    opt = static_cast<int>(sol->size());
                    witness = *sol;
                    break;
                }
            }
        }
    } else {
        std::cerr << "algo '" << args.algo << "' is not valid for lds\n";
        return kExitUsage;
    }

    if (args.algo == "tw") std::cout << "STATES " << states << "\n";
    if (args.k >= 0) {
        std::cout << "ANSWER " << (opt ? "YES" : "NO") << "\n";
        if (opt && args.witness) print_witness(witness);
        return opt ? kExitYes : kExitNo;
    }
    std::cout << "OPT " << *opt << "\n";
    if (args.witness) print_witness(witness);
    return kExitYes;
}

int run_solve_tc(const SolveArgs& args) {
    TestCoverInstance inst = read_tc_file(args.input);
    OracleCaps caps;
    caps.tc_tests = args.cap_tests;

    bool infeasible = false;
    std::optional<int> opt;
    std::vector<int> witness;
    std::uint64_t states = 0;

    if (args.algo == "brute") {
        if (args.k >= 0) {
            TcResult r = brute_force_tc(inst, args.k, caps);
            infeasible = r.status == TcStatus::Infeasible;
            if (r.status == TcStatus::Found) {
                opt = static_cast<int>(r.witness.size());
                witness = r.witness;
            }
        } else {
            TcOptimum r = brute_force_tc_opt(inst, caps);
            infeasible = r.status == TcStatus::Infeasible;
            if (r.status == TcStatus::Found) {
                opt = r.optimum;
                witness = r.witness;
            }
        }
    } else if (args.algo == "tw") {
        Graph aux = aux_graph(inst);
        TwOptions opts;
        opts.budget = args.k;
        opts.witness = args.witness;
        opts.timeout_seconds = args.timeout;
        TwOutcome out = solve_tc_tw(inst, decomposition_for(aux, args.td_path), opts);
        states = out.states_total;
        infeasible = out.status == TwStatus::Infeasible;
        if (out.status == TwStatus::Found) {
            opt = out.optimum;
            witness = out.witness;
        }
    } else if (args.algo == "kernel") {
        int k = args.k >= 0 ? args.k : std::max(inst.universe_size - 1, 0);
        auto r = tc_solve_by_enumeration(inst, k, caps);
        infeasible = r.status == TcStatus::Infeasible;
        if (r.status == TcStatus::Found) {
            opt = static_cast<int>(r.witness.size());
            witness = r.witness;
        }
    } else if (args.algo == "partition") {
        auto r = solve_tc_partition(inst, args.k, args.cap_universe);
        infeasible = r.status == TcStatus::Infeasible;
        if (r.status == TcStatus::Found) opt = r.optimum;
        if (args.witness && opt)
            std::cerr << "note: the partition algorithm reports no witness\n";
    } else {
        std::cerr << "algo '" << args.algo << "' is not valid for tc\n";
        return kExitUsage;
    }

    if (args.algo == "tw") std::cout << "STATES " << states << "\n";
    if (infeasible) {
        std::cout << "ANSWER INFEASIBLE\n";
        return kExitNo;
    }
    if (args.k >= 0) {
        std::cout << "ANSWER " << (opt ? "YES" : "NO") << "\n";
        if (opt && args.witness && !witness.empty()) print_witness(witness);
        return opt ? kExitYes : kExitNo;
    }
    std::cout << "OPT " << *opt << "\n";
    if (args.witness && !witness.empty()) print_witness(witness);
    return kExitYes;
}

ReductionKind kind_from_name(const std::string& name) {
    if (name == "lds-tw") return ReductionKind::LdsTreewidth;
    if (name == "lds-k") return ReductionKind::LdsSolutionSize;
    if (name == "tc-tw") return ReductionKind::TcTreewidth;
    return ReductionKind::TcSolutionSize;
}

int run_reduce(const std::string& target, const std::string& cnf_path, const std::string& out_path) {
    CnfFormula f = read_cnf_file(cnf_path);
    if (target == "to33") {
        CnfFormula out = to_33sat(f);
        int added = out.clause_count() - f.clause_count();
        write_cnf_file(out_path, out);
        std::cout << "VARS " << out.variable_count << " CLAUSES " << out.clause_count()
                  << " ADDED " << std::max(added, 0) << "\n";
        return kExitYes;
    }
    if (target == "lds-tw" || target == "lds-k") {
        ReducedGraph red = target == "lds-tw" ? lds_tw_reduction(to_33sat(f))
                                              : lds_solsize_reduction(f);
        write_gr_file(out_path, red.graph, red.trace_comments());
        std::cout << "K " << red.k << " VERTICES " << red.graph.vertex_count() << " EDGES "
                  << red.graph.edge_count() << "\n";
        return kExitYes;
    }
    ReducedTc red = target == "tc-tw" ? tc_tw_reduction(to_33sat(f)) : tc_solsize_reduction(f);
    write_tc_file(out_path, red.instance, red.trace_comments());
    std::cout << "K " << red.k << " ITEMS " << red.instance.universe_size << " TESTS "
              << red.instance.test_count() << "\n";
    return kExitYes;
}

// sweep spec: vars<=A,clauses<=B[,seeds=S]  (a unicode <= is accepted too)
struct SweepSpec {
    int vars = 3;
    int clauses = 3;
    int seeds = 0;
};

bool parse_sweep(std::string spec, SweepSpec& out) {
    auto replace_all = [](std::string& s, const std::string& from, const std::string& to) {
        size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos) {
            s.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all(spec, "≤", "<=");
    std::stringstream ss(spec);
    std::string part;
    try {
        while (std::getline(ss, part, ',')) {
            if (part.rfind("vars<=", 0) == 0)
                out.vars = std::stoi(part.substr(6));
            else if (part.rfind("clauses<=", 0) == 0)
                out.clauses = std::stoi(part.substr(9));
            else if (part.rfind("seeds=", 0) == 0)
                out.seeds = std::stoi(part.substr(6));
            else
                return false;
        }
    } catch (...) {
        return false;
    }
    return true;
}

int run_verify(const std::string& target, const std::string& cnf_path, const std::string& sweep,
               bool strict) {
    ReductionKind kind = kind_from_name(target);
    std::vector<std::pair<std::string, CnfFormula>> formulas;
    if (!cnf_path.empty()) {
        formulas.emplace_back(cnf_path, read_cnf_file(cnf_path));
    } else {
        SweepSpec spec;
        if (!parse_sweep(sweep, spec)) {
            std::cerr << "cannot parse sweep spec '" << sweep << "'\n";
            return kExitUsage;
        }
        int id = 0;
        for (const CnfFormula& f : enumerate_small_formulas(spec.vars, spec.clauses))
            formulas.emplace_back("exhaustive-" + std::to_string(id++), f);
        for (int s = 0; s < spec.seeds; ++s)
            formulas.emplace_back("seed-" + std::to_string(s),
                                  make_random_cnf(spec.vars + 1, 1 + s % (spec.clauses + 1), s));
    }

    bool all_agree = true, any_skipped = false;
    for (const auto& [name, f] : formulas) {
        VerifyReport rep = verify_reduction(f, kind);
        if (rep.skipped) {
            any_skipped = true;
            std::cout << "formula " << name << " skipped=" << rep.skip_reason << "\n";
            continue;
        }
        std::cout << "formula " << name << " sat=" << (rep.sat ? "y" : "n") << " inst="
                  << (rep.instance_yes ? "y" : "n") << " agree=" << (rep.agree ? "y" : "n") << "\n";
        if (!rep.agree) all_agree = false;
    }
    if (!all_agree) return kExitNo;
    if (strict && any_skipped) return kExitNo;
    return kExitYes;
}

int run_td(const std::string& sub, const std::string& gr_path, const std::string& td_path,
           const std::string& out_path, const std::string& strategy, int max_width) {
    if (sub == "width") {
        TreeDecomposition td = read_td_file(td_path);
        std::cout << "WIDTH " << width(td) << "\n";
        return kExitYes;
    }
    Graph g = read_gr_file(gr_path);
    if (sub == "check") {
        TreeDecomposition td = read_td_file(td_path);
        TdReport rep = validate_td(g, td);
        if (rep.ok()) {
            std::cout << "VALID WIDTH " << width(td) << "\n";
            return kExitYes;
        }
        std::cout << "INVALID " << rep.message << "\n";
        return kExitNo;
    }
    if (sub == "heuristic") {
        EliminationStrategy strat =
            strategy == "min-degree" ? EliminationStrategy::MinDegree : EliminationStrategy::MinFill;
        TreeDecomposition td = heuristic_td(g, strat);
        if (!out_path.empty()) write_td_file(out_path, td, g.vertex_count());
        std::cout << "WIDTH " << width(td) << " BAGS " << td.bag_count() << "\n";
        return kExitYes;
    }
    if (sub == "nicify") {
        TreeDecomposition td = td_path.empty() ? heuristic_td(g, EliminationStrategy::MinFill)
                                               : read_td_file(td_path);
        NiceTreeDecomposition ntd = make_nice(g, td);
        int w = -1;
        for (const auto& nd : ntd.nodes) w = std::max(w, static_cast<int>(nd.bag.size()) - 1);
        if (!out_path.empty()) {
            TreeDecomposition flat;
            for (const auto& nd : ntd.nodes) flat.bags.push_back(nd.bag);
            for (int id = 0; id < ntd.node_count(); ++id) {
                if (ntd.nodes[id].child0 >= 0) flat.edges.push_back({id, ntd.nodes[id].child0});
                if (ntd.nodes[id].child1 >= 0) flat.edges.push_back({id, ntd.nodes[id].child1});
            }
            write_td_file(out_path, flat, g.vertex_count());
        }
        std::cout << "NODES " << ntd.node_count() << " WIDTH " << w << "\n";
        return kExitYes;
    }
    // exact-small
    auto td = exact_td_small(g, max_width);
    if (td) {
        if (!out_path.empty()) write_td_file(out_path, *td, g.vertex_count());
        std::cout << "FOUND WIDTH " << width(*td) << "\n";
        return kExitYes;
    }
    std::cout << "NONE\n";
    return kExitNo;
}

int run_check(const std::string& problem, const std::string& path, const std::string& solution) {
    std::vector<int> ids;
    std::stringstream ss(solution);
    int x;
    while (ss >> x) ids.push_back(x - 1);
    bool valid;
    if (problem == "lds") {
        Graph g = read_gr_file(path);
        valid = is_locating_dominating_set(g, ids);
    } else {
        TestCoverInstance inst = read_tc_file(path);
        valid = is_test_cover(inst, ids);
    }
    std::cout << (valid ? "VALID" : "INVALID") << "\n";
    return valid ? kExitYes : kExitNo;
}

int run_bench(const std::string& corpus, const std::string& algos_csv, double timeout,
              std::uint64_t seed) {
    (void)seed;  // the solvers are deterministic; the flag pins the interface
    std::vector<std::string> algos;
    {
        std::stringstream ss(algos_csv);
        std::string a;
        while (std::getline(ss, a, ',')) algos.push_back(a);
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(corpus)) {
        auto ext = entry.path().extension().string();
        if (ext == ".gr" || ext == ".tc") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::cout << "instance\talgo\tanswer\topt\tmillis\tstates\n";
    for (const auto& file : files) {
        bool is_gr = file.extension() == ".gr";
        std::map<std::string, long long> agreed;
        bool conflict = false;
        for (const auto& algo : algos) {
            if (!is_gr && algo == "kernel") continue;
            if (is_gr && algo == "partition") continue;
            auto t0 = std::chrono::steady_clock::now();
            std::string answer = "OK";
            long long optval = -1;
            std::uint64_t states = 0;
            try {
                if (is_gr) {
                    Graph g = read_gr_file(file.string());
                    if (algo == "brute") {
                        optval = brute_force_lds_opt(g);
                    } else if (algo == "tw") {
                        TwOptions o;
                        o.timeout_seconds = timeout;
                        TwOutcome r = solve_lds_tw(g, decomposition_for(g, ""), o);
                        optval = r.optimum;
                        states = r.states_total;
                    } else if (algo == "kernel") {
                        for (int k = 0; k <= g.vertex_count(); ++k)
                            if (auto sol = lds_solve_by_enumeration(g, k)) {
                                optval = static_cast<long long>(sol->size());
                                break;
                            }
                    } else {
                        continue;
                    }
                } else {
                    TestCoverInstance inst = read_tc_file(file.string());
                    if (algo == "brute") {
                        auto r = brute_force_tc_opt(inst);
                        answer = r.status == TcStatus::Infeasible ? "INFEASIBLE" : "OK";
                        optval = r.optimum;
                    } else if (algo == "tw") {
                        Graph aux = aux_graph(inst);
                        TwOptions o;
                        o.timeout_seconds = timeout;
                        TwOutcome r = solve_tc_tw(inst, decomposition_for(aux, ""), o);
                        answer = r.status == TwStatus::Infeasible ? "INFEASIBLE" : "OK";
                        optval = r.status == TwStatus::Found ? r.optimum : -1;
                        states = r.states_total;
                    } else if (algo == "partition") {
                        auto r = solve_tc_partition(inst);
                        answer = r.status == TcStatus::Infeasible ? "INFEASIBLE" : "OK";
                        optval = r.status == TcStatus::Found ? r.optimum : -1;
                    } else {
                        continue;
                    }
                }
            } catch (const SolveTimeout&) {
                answer = "TIMEOUT";
            } catch (const CapExceeded&) {
                answer = "SKIPPED";
            }
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            std::cout << file.filename().string() << "\t" << algo << "\t" << answer << "\t"
                      << optval << "\t" << ms << "\t" << states << "\n";
            if (answer == "OK" || answer == "INFEASIBLE") {
                auto [it, fresh] = agreed.emplace(answer, optval);
                if (!fresh && it->second != optval) conflict = true;
                if (agreed.size() > 1) conflict = true;
            }
        }
        if (conflict) {
            std::cout << file.filename().string() << "\tCONFLICT\n";
            return kExitNo;
        }
    }
    return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact solvers and reductions for identification problems"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "solve an instance");
    solve->add_option("problem", sa.problem, "lds or tc")->required()
        ->check(CLI::IsMember({"lds", "tc"}));
    solve->add_option("input", sa.input, "instance file (.gr or .tc)")->required();
    solve->add_option("--algo", sa.algo, "brute, tw, kernel, partition");
    solve->add_option("-k,--budget", sa.k, "decision budget");
    solve->add_option("--td", sa.td_path, "tree decomposition file for --algo tw");
    solve->add_flag("--witness", sa.witness, "print a witness");
    solve->add_option("--seed", sa.seed, "random seed (deterministic algorithms ignore it)");
    solve->add_option("--cap-vertices", sa.cap_vertices, "brute-force vertex cap");
    solve->add_option("--cap-tests", sa.cap_tests, "brute-force test cap");
    solve->add_option("--cap-universe", sa.cap_universe, "partition DP universe cap");
    solve->add_option("--timeout", sa.timeout, "soft timeout in seconds for the DP");

    std::string red_target, red_in, red_out;
    auto* reduce = app.add_subcommand("reduce", "build a reduced instance from a CNF");
    reduce->add_option("target", red_target, "to33, lds-tw, lds-k, tc-tw, tc-k")->required()
        ->check(CLI::IsMember({"to33", "lds-tw", "lds-k", "tc-tw", "tc-k"}));
    reduce->add_option("cnf", red_in, "DIMACS input")->required();
    reduce->add_option("output", red_out, "output instance path")->required();

    std::string ver_target, ver_cnf, ver_sweep;
    bool ver_strict = false;
    auto* verify = app.add_subcommand("verify", "check SAT/instance agreement for a reduction");
    verify->add_option("target", ver_target, "lds-tw, lds-k, tc-tw, tc-k")->required()
        ->check(CLI::IsMember({"lds-tw", "lds-k", "tc-tw", "tc-k"}));
    verify->add_option("cnf", ver_cnf, "DIMACS input (omit when sweeping)");
    verify->add_option("--sweep", ver_sweep, "sweep spec, e.g. vars<=3,clauses<=3,seeds=100");
    verify->add_flag("--strict", ver_strict, "fail when formulas are skipped");

    std::string td_sub, td_gr, td_td, td_out, td_strategy = "min-fill";
    int td_maxw = 0;
    auto* td = app.add_subcommand("td", "tree decomposition utilities");
    td->add_option("sub", td_sub, "check, width, nicify, heuristic, exact-small")->required()
        ->check(CLI::IsMember({"check", "width", "nicify", "heuristic", "exact-small"}));
    td->add_option("--graph", td_gr, "graph file");
    td->add_option("--td", td_td, "tree decomposition file");
    td->add_option("-o,--output", td_out, "output .td path");
    td->add_option("--strategy", td_strategy, "min-degree or min-fill");
    td->add_option("--max-width", td_maxw, "width bound for exact-small");

    std::string chk_problem, chk_path, chk_solution;
    auto* check = app.add_subcommand("check", "validate a candidate solution");
    check->add_option("problem", chk_problem, "lds or tc")->required()
        ->check(CLI::IsMember({"lds", "tc"}));
    check->add_option("instance", chk_path, "instance file")->required();
    check->add_option("--solution", chk_solution, "1-based ids, space separated")->required();

    std::string bench_dir, bench_algos = "brute,tw";
    double bench_timeout = 0;
    std::uint64_t bench_seed = 0;
    auto* bench = app.add_subcommand("bench", "run an algorithm matrix over a corpus directory");
    bench->add_option("corpus", bench_dir, "directory of .gr/.tc files")->required();
    bench->add_option("--algos", bench_algos, "comma-separated algorithm list");
    bench->add_option("--timeout", bench_timeout, "per-run soft timeout in seconds");
    bench->add_option("--seed", bench_seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (solve->parsed()) {
            if (sa.problem == "lds" && sa.algo == "partition") {
                std::cerr << "the partition algorithm only applies to tc\n";
                return kExitUsage;
            }
            return sa.problem == "lds" ? run_solve_lds(sa) : run_solve_tc(sa);
        }
        if (reduce->parsed()) return run_reduce(red_target, red_in, red_out);
        if (verify->parsed()) {
            if (ver_cnf.empty() && ver_sweep.empty()) {
                std::cerr << "verify needs a CNF file or --sweep\n";
                return kExitUsage;
            }
            return run_verify(ver_target, ver_cnf, ver_sweep, ver_strict);
        }
        if (td->parsed()) return run_td(td_sub, td_gr, td_td, td_out, td_strategy, td_maxw);
        if (check->parsed()) return run_check(chk_problem, chk_path, chk_solution);
        if (bench->parsed()) return run_bench(bench_dir, bench_algos, bench_timeout, bench_seed);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitNo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    }
    return kExitUsage;
}
