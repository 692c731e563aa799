// Command-line front end: kernel validation, Haar decomposition, form and
// adjoint evaluation, T(1) testing reports, exponent ranges, signature
// classification, the unboundedness construction, and contraction planning.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "entangled/counterexample.hpp"
#include "entangled/form.hpp"
#include "entangled/io.hpp"
#include "entangled/t1.hpp"
#include "entangled/version.hpp"

using namespace entangled;

namespace {

struct GlobalOptions {
    int decimal = -1;       // extra display column when >= 0
    bool manifest = false;  // print the run manifest before the report
    int threads = 1;
};

struct Manifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::vector<std::string> params;
    std::vector<std::string> outputs;

    void print(std::ostream& os) const {
        os << "manifest: artifact=entangled/" << kVersion << " subcommand=" << subcommand << "\n";
        for (const auto& [path, digest] : inputs)
            os << "manifest: input=" << path << " fnv1a64=" << digest << "\n";
        for (const auto& p : params) os << "manifest: param=" << p << "\n";
        for (const auto& o : outputs) os << "manifest: output=" << o << "\n";
    }
};

std::string show(const Rational& q, const GlobalOptions& opts) {
    std::string out = to_fraction_string(q);
    if (opts.decimal >= 0)
        out += " (" + to_decimal_string(q, static_cast<unsigned>(opts.decimal)) + ")";
    return out;
}

std::string show_square(const DyadicSquare& q) {
    std::ostringstream os;
    os << q.scale() << ":" << q.x.index << ":" << q.y.index;
    return os.str();
}

Edge parse_edge(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw Error("edge must be 'u,v', got '" + text + "'");
    return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
}

// "i,j=path" bindings for --function flags.
FunctionMap load_functions(const std::vector<std::string>& bindings, Manifest& manifest) {
    FunctionMap fs;
    for (const auto& b : bindings) {
        auto eq = b.find('=');
        if (eq == std::string::npos) throw Error("expected 'i,j=path', got '" + b + "'");
        Edge e = parse_edge(b.substr(0, eq));
        std::string path = b.substr(eq + 1);
        manifest.inputs.push_back({path, file_digest(path)});
        if (!fs.emplace(e, load_step_function(path)).second)
            throw Error("duplicate function binding for edge (" + std::to_string(e.first) + "," +
                        std::to_string(e.second) + ")");
    }
    return fs;
}

std::string signature_string(const Signature& s) {
    std::ostringstream os;
    os << s;
    return os.str();
}

int cmd_validate_kernel(const std::string& kernel_path, const GlobalOptions& opts) {
    Manifest manifest{"validate-kernel", {{kernel_path, file_digest(kernel_path)}}, {}, {}};
    PerfectKernel k = load_kernel(kernel_path);
    if (opts.manifest) manifest.print(std::cout);
    std::cout << "kernel: m=" << k.m << " n=" << k.n << " scale=" << k.resolution()
              << " cells=" << k.body.cell_count() << "\n";
    auto report = validate_diagonal_constancy(k);
    if (report.valid()) {
        std::cout << "diagonal-constancy: PASS\n";
    } else {
        std::cout << "diagonal-constancy: FAIL violations=" << report.violations.size() << "\n";
        std::size_t shown = 0;
        for (const auto& v : report.violations) {
            if (shown++ == 10) {
                std::cout << "  ...\n";
                break;
            }
            std::cout << "  cube " << v.cube << " values " << show(v.value_a, opts) << " vs "
                      << show(v.value_b, opts) << "\n";
        }
    }
    if (k.dimension() >= 3) {
        auto size = size_constant_report(k);
        std::cout << "size-constant: " << show(size.constant, opts) << "\n";
        std::cout << "diagonal-cells-with-value: " << size.vacuous_cells.size() << "\n";
        if (k.declared_size_constant)
            std::cout << "declared-size-constant: " << show(*k.declared_size_constant, opts)
                      << (size.constant <= *k.declared_size_constant ? " (holds)" : " (exceeded)")
                      << "\n";
    }
    return report.valid() ? 0 : 1;
}

int cmd_decompose(const std::string& kernel_path, const std::string& outdir,
                  const GlobalOptions& opts) {
    Manifest manifest{"decompose", {{kernel_path, file_digest(kernel_path)}}, {}, {}};
    PerfectKernel k = load_kernel(kernel_path);
    Decomposition d = decompose(k);
    if (!outdir.empty()) std::filesystem::create_directories(outdir);
    if (opts.manifest) manifest.print(std::cout);
    std::cout << "decomposition: signatures=" << d.fields.size()
              << " scaling-cubes=" << d.scaling.size() << "\n";
    for (const auto& field : d.fields) {
        auto norms = coeff_norms(field);
        std::cout << "sig=" << field.signature << " coeffs=" << field.coeffs.size()
                  << " linf=" << show(norms.linf, opts)
                  << " bmo2=" << show(norms.bmo_squared, opts) << "\n";
        if (!outdir.empty()) {
            std::string path = outdir + "/coeff_" + signature_string(field.signature) + ".txt";
            std::ofstream out(path);
            write_coefficients(out, field, k.m, k.n);
        }
    }
    for (const auto& term : d.scaling)
        std::cout << "scaling: cube " << term.cube << " mean " << show(term.mean, opts) << "\n";
    // The decomposition must reproduce the kernel exactly.
    bool exact = reconstruct_kernel(d, k.resolution()) == k.body;
    std::cout << "reconstruction: " << (exact ? "EXACT" : "MISMATCH") << "\n";
    return exact ? 0 : 1;
}

int cmd_evaluate(const std::string& kernel_path, const std::string& graph_path,
                 const std::vector<std::string>& bindings, const std::string& adjoint_edge,
                 const std::string& plan_mode, const std::string& output,
                 const GlobalOptions& opts) {
    Manifest manifest{"evaluate",
                      {{kernel_path, file_digest(kernel_path)},
                       {graph_path, file_digest(graph_path)}},
                      {"plan=" + plan_mode},
                      {}};
    PerfectKernel k = load_kernel(kernel_path);
    BipartiteGraph g = load_graph(graph_path);
    FunctionMap fs = load_functions(bindings, manifest);
    PlanMode mode = plan_mode == "auto" ? PlanMode::Auto : PlanMode::Naive;

    if (!adjoint_edge.empty()) {
        Edge uv = parse_edge(adjoint_edge);
        manifest.params.push_back("adjoint=" + adjoint_edge);
        if (!output.empty()) manifest.outputs.push_back(output);
        if (opts.manifest) manifest.print(std::cout);
        StepFunction t = evaluate_adjoint(k, g, uv, fs);
        if (output.empty()) {
            write_step_function(std::cout, t);
        } else {
            std::ofstream out(output);
            write_step_function(out, t);
            std::cout << "adjoint: cells=" << t.cell_count() << " written=" << output << "\n";
        }
        return 0;
    }
    if (opts.manifest) manifest.print(std::cout);
    Rational lambda = evaluate_form(k, g, fs, mode);
    std::cout << "lambda = " << show(lambda, opts) << "\n";
    if (mode == PlanMode::Auto && k.dimension() <= 8) {
        std::vector<std::int64_t> widths;
        for (int a = 0; a < k.dimension(); ++a) {
            auto r = k.body.support_range(a);
            widths.push_back(r ? r->second - r->first : 1);
        }
        auto plan = plan_contraction(g, KernelStructure::Dense, widths);
        std::cout << "plan: order";
        for (int axis : plan.order)
            std::cout << " " << (axis < g.m ? "x" : "y") << (axis < g.m ? axis + 1 : axis - g.m + 1);
        std::cout << " predicted-cost=" << plan.predicted_cost
                  << " naive-cost=" << plan.naive_cost << "\n";
    }
    return 0;
}

int cmd_test_t1(const std::string& kernel_path, const std::string& graph_path,
                const std::vector<std::string>& edges_flag, int max_depth,
                const GlobalOptions& opts) {
    Manifest manifest{"test-t1",
                      {{kernel_path, file_digest(kernel_path)},
                       {graph_path, file_digest(graph_path)}},
                      {"max-depth=" + std::to_string(max_depth)},
                      {}};
    PerfectKernel k = load_kernel(kernel_path);
    BipartiteGraph g = load_graph(graph_path);
    if (opts.manifest) manifest.print(std::cout);

    std::vector<Edge> edges;
    if (edges_flag.empty())
        edges.assign(g.edges.begin(), g.edges.end());
    else
        for (const auto& e : edges_flag) edges.push_back(parse_edge(e));

    auto diag = validate_diagonal_constancy(k);
    std::cout << "kernel: m=" << k.m << " n=" << k.n << " scale=" << k.resolution()
              << " perfect=" << (diag.valid() ? "yes" : "NO") << "\n";

    auto wbp = weak_boundedness_scan(k, g, max_depth);
    std::cout << "wbp: max-ratio=" << show(wbp.max_ratio, opts) << " witness="
              << (wbp.witness ? show_square(*wbp.witness) : std::string("-"))
              << " scanned-scales=[" << wbp.coarsest_scanned << "," << wbp.finest_scanned
              << "]\n";

    bool all_ok = diag.valid();
    for (const auto& uv : edges) {
        Rational bmo2 = t1_bmo(k, g, uv);
        // Restricted tests over every square the WBP scan visited.
        Rational restricted_max(0);
        std::optional<DyadicSquare> restricted_witness;
        bool local_ok = true, necessity_ok = true;
        Rational worst_residual(0);
        for (std::int64_t s = std::max(wbp.coarsest_scanned, k.covering_scale());
             s <= wbp.finest_scanned; ++s) {
            auto xr = k.x_support_range(), yr = k.y_support_range();
            if (!xr || !yr) break;
            std::int64_t shift = k.resolution() - s;
            for (std::int64_t ix = floor_shift(xr->first, shift);
                 ix <= floor_shift(xr->second - 1, shift); ++ix)
                for (std::int64_t jy = floor_shift(yr->first, shift);
                     jy <= floor_shift(yr->second - 1, shift); ++jy) {
                    DyadicSquare q{s, ix, jy};
                    Rational rt = restricted_test(k, g, uv, q);
                    if (rt > restricted_max) {
                        restricted_max = rt;
                        restricted_witness = q;
                    }
                    auto local = local_constancy_check(k, g, uv, q);
                    local_ok = local_ok && local.ok;
                    worst_residual = std::max(worst_residual, local.residual);
                    auto nec = necessity_checks(k, g, uv, q);
                    necessity_ok = necessity_ok && nec.ok;
                }
        }
        all_ok = all_ok && local_ok && necessity_ok;
        std::cout << "edge (" << uv.first << "," << uv.second << "): bmo2=" << show(bmo2, opts)
                  << " restricted-max=" << show(restricted_max, opts) << " at "
                  << (restricted_witness ? show_square(*restricted_witness) : std::string("-"))
                  << " local-constancy=" << (local_ok ? "PASS" : "FAIL")
                  << " necessity=" << (necessity_ok ? "PASS" : "FAIL") << "\n";
    }
    std::cout << "result: " << (all_ok ? "PASS" : "FAIL") << "\n";
    return all_ok ? 0 : 1;
}

int cmd_exponents(const std::string& graph_path, const GlobalOptions& opts) {
    Manifest manifest{"exponents", {{graph_path, file_digest(graph_path)}}, {}, {}};
    BipartiteGraph g = load_graph(graph_path);
    if (opts.manifest) manifest.print(std::cout);
    auto d = exponent_thresholds(g);
    std::cout << "d:";
    for (const auto& [e, di] : d.d)
        std::cout << " (" << e.first << "," << e.second << ")=" << di;
    std::cout << "\n";
    std::cout << "sum-1/d: " << show(d.reciprocal_sum(), opts) << "\n";
    auto witness = feasibility_witness(d);
    std::cout << "witness:";
    for (const auto& [e, p] : witness.p)
        std::cout << " p(" << e.first << "," << e.second << ")="
                  << (p.infinite ? std::string("inf") : show(p.value, opts));
    std::cout << "\n";
    std::cout << "sum-1/p: " << show(witness.reciprocal_sum(), opts) << "\n";
    return 0;
}

int cmd_classify(const std::string& graph_path, const GlobalOptions& opts) {
    Manifest manifest{"classify", {{graph_path, file_digest(graph_path)}}, {}, {}};
    BipartiteGraph g = load_graph(graph_path);
    if (opts.manifest) manifest.print(std::cout);
    for (const auto& sig : all_signatures(g.m, g.n)) {
        auto cls = classify_signature(g, sig);
        std::cout << "sig=" << sig << " S={";
        bool first = true;
        for (int i : sig.haar_x()) std::cout << (first ? "" : ",") << i, first = false;
        std::cout << "} T={";
        first = true;
        for (int j : sig.haar_y()) std::cout << (first ? "" : ",") << j, first = false;
        std::cout << "} class=" << cls << "\n";
    }
    return 0;
}

void print_counterexample_csv_header(std::ostream& os, const GlobalOptions& opts) {
    os << "r,n,lambda,series,series_match,closed_form,closed_form_match,closed_form_gap,"
          "f_norm_pow,f_norm_match,bmo2,bmo2_match,bmo2_le_2,wbp_ratio,wbp_witness,wbp_le_1,"
          "size_ok,dense_lambda,dense_match";
    if (opts.decimal >= 0) os << ",lambda_decimal";  // display-only
    os << "\n";
}

void print_counterexample_csv_row(std::ostream& os, const CounterexampleReport& rep,
                                  const GlobalOptions& opts) {
    auto flag = [](bool b) { return b ? "true" : "false"; };
    os << rep.r << "," << rep.n << "," << to_fraction_string(rep.lambda) << ","
       << to_fraction_string(rep.series) << "," << flag(rep.series_match) << ","
       << to_fraction_string(rep.closed_form) << "," << flag(rep.closed_form_match) << ","
       << to_fraction_string(rep.closed_form_gap) << "," << to_fraction_string(rep.f_norm_pow)
       << "," << flag(rep.f_norm_match) << "," << to_fraction_string(rep.bmo_squared) << ","
       << flag(rep.bmo_match) << "," << flag(rep.bmo_le_2) << ","
       << to_fraction_string(rep.wbp_ratio) << "," << show_square(rep.wbp_witness) << ","
       << flag(rep.wbp_le_1) << "," << flag(rep.size_ok) << ","
       << (rep.dense_lambda ? to_fraction_string(*rep.dense_lambda) : std::string("-")) << ","
       << flag(rep.dense_match);
    if (opts.decimal >= 0)
        os << "," << to_decimal_string(rep.lambda, static_cast<unsigned>(opts.decimal));
    os << "\n";
}

int cmd_counterexample(int r, int n, int table_rmax, bool dense_check,
                       const GlobalOptions& opts) {
    Manifest manifest{"counterexample",
                      {},
                      {"r=" + std::to_string(r), "n=" + std::to_string(n),
                       "table=" + std::to_string(table_rmax),
                       std::string("dense-check=") + (dense_check ? "true" : "false")},
                      {}};
    if (opts.manifest) manifest.print(std::cout);
    print_counterexample_csv_header(std::cout, opts);
    if (table_rmax > 0) {
        auto table = divergence_table(table_rmax, n, dense_check, opts.threads);
        for (const auto& row : table.rows) print_counterexample_csv_row(std::cout, row, opts);
        std::cout << "# lambda_increasing_from_2=" << (table.lambda_increasing_from_2 ? "true" : "false")
                  << " hypotheses_hold=" << (table.hypotheses_hold ? "true" : "false") << "\n";
    } else {
        print_counterexample_csv_row(std::cout, run_counterexample({r, n}, dense_check), opts);
    }
    return 0;
}

int cmd_bench_contraction(const std::string& graph_path, std::int64_t cells,
                          const std::string& structure, const GlobalOptions& opts) {
    Manifest manifest{"bench-contraction",
                      {{graph_path, file_digest(graph_path)}},
                      {"cells=" + std::to_string(cells), "structure=" + structure},
                      {}};
    BipartiteGraph g = load_graph(graph_path);
    if (opts.manifest) manifest.print(std::cout);
    KernelStructure ks = structure == "dense" ? KernelStructure::Dense : KernelStructure::Atomic;
    std::vector<std::int64_t> widths(static_cast<std::size_t>(g.m + g.n), cells);
    auto plan = plan_contraction(g, ks, widths);
    std::cout << "axes: " << g.m + g.n << " cells-per-axis: " << cells << " structure: "
              << structure << "\n";
    std::cout << "order:";
    for (int axis : plan.order)
        std::cout << " " << (axis < g.m ? "x" : "y") << (axis < g.m ? axis + 1 : axis - g.m + 1);
    std::cout << "\n";
    for (const auto& step : plan.steps)
        std::cout << "step: axis=" << (step.axis < g.m ? "x" : "y")
                  << (step.axis < g.m ? step.axis + 1 : step.axis - g.m + 1)
                  << " merges=" << step.factors.size() << " cost=" << step.cost << "\n";
    std::cout << "predicted-cost: " << plan.predicted_cost << "\n";
    std::cout << "naive-cost: " << plan.naive_cost << "\n";
    if (g.m + g.n <= 8) {
        auto factors = contraction_factors(g, ks);
        std::vector<int> order(static_cast<std::size_t>(g.m + g.n));
        for (std::size_t a = 0; a < order.size(); ++a) order[a] = static_cast<int>(a);
        BigInt worst = plan.predicted_cost;
        do {
            worst = std::max(worst, elimination_cost(factors, widths, order));
        } while (std::next_permutation(order.begin(), order.end()));
        std::cout << "worst-order-cost: " << worst << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact evaluation and T(1)-type testing of entangled dyadic multilinear forms"};
    app.set_version_flag("--version", std::string("entangled ") + kVersion);
    app.require_subcommand(1);

    GlobalOptions opts;
    if (const char* env = std::getenv("ENTANGLED_THREADS")) opts.threads = std::atoi(env);
    app.add_option("--decimal", opts.decimal, "display-only decimal column with this many digits");
    app.add_flag("--manifest", opts.manifest, "print the run manifest before the report");
    app.add_option("--threads", opts.threads, "worker thread cap for parallel tables");

    std::string kernel_path, graph_path, outdir, adjoint_edge, output;
    std::string plan_mode = "naive", structure = "atomic";
    std::vector<std::string> bindings, edges_flag;
    int max_depth = 6, cx_r = 1, cx_n = 2, cx_table = 0;
    std::int64_t cells = 4;
    bool dense_check = false;

    auto* validate = app.add_subcommand("validate-kernel", "diagonal constancy and size bound");
    validate->add_option("--kernel", kernel_path)->required();

    auto* decomp = app.add_subcommand("decompose", "Haar coefficient fields per signature");
    decomp->add_option("--kernel", kernel_path)->required();
    decomp->add_option("--outdir", outdir, "write COEFF files here");

    auto* evaluate = app.add_subcommand("evaluate", "evaluate the form or an adjoint");
    evaluate->add_option("--kernel", kernel_path)->required();
    evaluate->add_option("--graph", graph_path)->required();
    evaluate->add_option("--function", bindings, "edge binding i,j=path");
    evaluate->add_option("--adjoint", adjoint_edge, "leave out edge u,v and emit the adjoint");
    evaluate->add_option("--plan", plan_mode)->check(CLI::IsMember({"naive", "auto"}));
    evaluate->add_option("--output", output, "write the adjoint STEP file here");

    auto* adjoint = app.add_subcommand("adjoint", "evaluate one adjoint operator");
    adjoint->add_option("--kernel", kernel_path)->required();
    adjoint->add_option("--graph", graph_path)->required();
    adjoint->add_option("--edge", adjoint_edge)->required();
    adjoint->add_option("--function", bindings, "edge binding i,j=path");
    adjoint->add_option("--output", output);

    auto* t1 = app.add_subcommand("test-t1", "testing-condition report");
    t1->add_option("--kernel", kernel_path)->required();
    t1->add_option("--graph", graph_path)->required();
    t1->add_option("--edge", edges_flag, "restrict to edges u,v (default: all)");
    t1->add_option("--max-depth", max_depth);

    auto* exponents = app.add_subcommand("exponents", "threshold exponents and a witness tuple");
    exponents->add_option("--graph", graph_path)->required();

    auto* classify = app.add_subcommand("classify", "classify all signatures");
    classify->add_option("--graph", graph_path)->required();

    auto* cx = app.add_subcommand("counterexample", "the m=1 unboundedness construction");
    cx->add_option("--r", cx_r);
    cx->add_option("--n", cx_n);
    cx->add_option("--table", cx_table, "emit rows r=1..r_max");
    cx->add_flag("--dense-check", dense_check, "cross-check densely for r <= 3");

    auto* bench = app.add_subcommand("bench-contraction", "contraction plan and cost report");
    bench->add_option("--graph", graph_path)->required();
    bench->add_option("--cells", cells);
    bench->add_option("--structure", structure)->check(CLI::IsMember({"atomic", "dense"}));

    for (auto* sub : app.get_subcommands({})) sub->fallthrough(true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate_kernel(kernel_path, opts);
        if (decomp->parsed()) return cmd_decompose(kernel_path, outdir, opts);
        if (evaluate->parsed())
            return cmd_evaluate(kernel_path, graph_path, bindings, adjoint_edge, plan_mode,
                                output, opts);
        if (adjoint->parsed())
            return cmd_evaluate(kernel_path, graph_path, bindings, adjoint_edge, "naive", output,
                                opts);
        if (t1->parsed()) return cmd_test_t1(kernel_path, graph_path, edges_flag, max_depth, opts);
        if (exponents->parsed()) return cmd_exponents(graph_path, opts);
        if (classify->parsed()) return cmd_classify(graph_path, opts);
        if (cx->parsed()) return cmd_counterexample(cx_r, cx_n, cx_table, dense_check, opts);
        if (bench->parsed()) return cmd_bench_contraction(graph_path, cells, structure, opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
