#pragma once

#include <algorithm>
#include <cstddef>
#include <iostream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "canonical.hpp"
#include "document.hpp"
#include "iterative.hpp"
#include "operator.hpp"
#include "solutions.hpp"
#include "transform.hpp"

namespace itercanon::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_domain_error = 1,
    exit_parse_error = 2,
};

/// "1 - 1/2*x^2 + O(x^5)"; the variable is shifted when the base point is not 0.
inline std::string format_jet(const Jet& jet)
{
    const std::string var = sgn(jet.base_point()) == 0 ? "x" : "(x - " + format_rational(jet.base_point()) + ")";
    std::string out;
    for (std::size_t k = 0; k < jet.coefficients().size(); ++k) {
        const Rational& c = jet[k];
        if (sgn(c) == 0)
            continue;
        const Rational mag = abs(c);
        if (out.empty())
            out = sgn(c) < 0 ? "-" : "";
        else
            out += sgn(c) < 0 ? " - " : " + ";
        const bool unit = mag == 1;
        if (k == 0 || !unit)
            out += format_rational(mag);
        if (k > 0) {
            if (!unit)
                out += "*";
            out += var;
            if (k > 1)
                out += "^" + std::to_string(k);
        }
    }
    if (out.empty())
        out = "0";
    return out + " + O(" + var + "^" + std::to_string(jet.order() + 1) + ")";
}

inline void print_matrix(std::ostream& out, const std::string& name, const MatrixJet& m)
{
    if (m.is_zero()) {
        out << name << " = 0\n";
        return;
    }
    if (m.dim() == 1) {
        out << name << " = " << format_jet(m(0, 0)) << "\n";
        return;
    }
    if (const auto lambda = scalar_test(m)) {
        out << name << " = (" << format_jet(*lambda) << ") I\n";
        return;
    }
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            out << name << "[" << i << "][" << j << "] = " << format_jet(m(i, j)) << "\n";
}

inline void print_system(std::ostream& out, const LinearSystem& sys)
{
    out << "order " << sys.n() << ", dim " << sys.dim() << ", truncation " << sys.order() << ", base point "
        << format_rational(sys.base_point()) << "\n";
    for (int k = 1; k <= sys.n(); ++k)
        print_matrix(out, "B" + std::to_string(k), sys.b(k));
}

struct CommonOptions {
    std::string input;
    std::optional<int> order;
    bool json = false;
};

inline Document load(const std::string& path, std::istream& in)
{
    if (path == "-") {
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return parse_document(text, "<stdin>");
    }
    return read_document(path);
}

inline int cmd_iterate(const CommonOptions& opt, int n, std::istream& in, std::ostream& out)
{
    const DiffOperator psi = operator_from_document(load(opt.input, in), opt.order);
    const LinearForm form = iterate(psi, n);
    if (opt.json) {
        out << print_document(form_to_document(form));
        return exit_ok;
    }
    const Document doc = form_to_document(form);
    const int order = doc["truncation"].get<int>();
    out << "Psi^" << n << ", dim " << form.dim() << ", truncation " << order << "\n";
    for (int j = 0; j <= n; ++j)
        print_matrix(out, "K" + std::to_string(j), form.k(j).truncated(order));
    return exit_ok;
}

inline int cmd_normalize(const CommonOptions& opt, std::istream& in, std::ostream& out)
{
    const LinearSystem sys = system_from_document(load(opt.input, in), opt.order);
    const NormalForm nf = normal_form_gauge(sys);
    if (opt.json) {
        Document doc;
        doc["kind"] = "normal_form";
        doc["truncation"] = nf.system.order();
        doc["gauge"] = matrix_jet_to_document(nf.gauge.truncated(std::min(nf.gauge.order(), nf.system.order())));
        doc["system"] = system_to_document(nf.system);
        out << print_document(doc);
        return exit_ok;
    }
    out << "normal form: ";
    print_system(out, nf.system);
    print_matrix(out, "Q", nf.gauge);
    return exit_ok;
}

inline int cmd_check(const CommonOptions& opt, std::istream& in, std::ostream& out)
{
    const LinearSystem sys = system_from_document(load(opt.input, in), opt.order);
    const CanonicalVerdict v = canonical_class_test(sys);
    if (opt.json) {
        out << print_document(verdict_to_document(v));
        return exit_ok;
    }
    out << "canonical class: " << (v.is_canonical_class ? "yes" : "no") << " (to order " << v.order << ")\n";
    if (v.q)
        out << "q = " << format_jet(v.q->truncated(std::min(v.q->order(), v.order))) << "\n";
    if (v.witness)
        out << "witness: B" << v.witness->j << "[" << v.witness->row << "][" << v.witness->col << "] ("
            << to_string(v.witness->reason) << ")\n";
    return exit_ok;
}

inline int cmd_transform(const CommonOptions& opt, const std::string& transform_path, std::istream& in,
                         std::ostream& out)
{
    const LinearSystem sys = system_from_document(load(opt.input, in), opt.order);
    const PointTransformation tr = transform_from_document(load(transform_path, in), sys.order(), opt.order);
    out << print_document(system_to_document(pushforward(sys, tr)));
    return exit_ok;
}

struct SolveOptions {
    bool numeric_check = false;
    int steps = 1000;
};

inline int cmd_solve(const CommonOptions& opt, const SolveOptions& solve, std::istream& in, std::ostream& out)
{
    const LinearSystem sys = system_from_document(load(opt.input, in), opt.order);
    const CanonicalVerdict v = canonical_class_test(sys);
    if (!v.is_canonical_class) {
        const auto& w = *v.witness;
        throw Error(ErrorKind::invalid_argument,
                    "system is not in the canonical class (witness B" + std::to_string(w.j) + "[" +
                        std::to_string(w.row) + "][" + std::to_string(w.col) + "], " +
                        std::string(to_string(w.reason)) + ")");
    }
    const int n = sys.n();
    const std::size_t m = sys.dim();
    const SolutionBasis basis = make_basis(*v.q, n, m);

    // y = Q (e_i phi_j): the n m fundamental solutions of the original system
    std::vector<std::vector<Jet>> solutions;
    for (std::size_t i = 0; i < m; ++i)
        for (const Jet& phi : basis.basis) {
            std::vector<Jet> y;
            for (std::size_t r = 0; r < m; ++r)
                y.push_back(v.gauge(r, i) * phi);
            solutions.push_back(std::move(y));
        }

    int res_order = std::numeric_limits<int>::max();
    int zero_through = std::numeric_limits<int>::max();
    bool zero = true;
    for (const auto& y : solutions) {
        const Residual res = residual(sys, y);
        res_order = std::min(res_order, res.order);
        zero_through = std::min(zero_through, res.zero_through);
        zero = zero && res.is_zero();
    }

    std::optional<double> defect;
    const Rational stop = ratio(1, 2);
    const double threshold = 1e-6;
    if (solve.numeric_check) {
        defect = 0.0;
        for (const auto& y : solutions)
            defect = std::max(*defect, numeric_crosscheck(sys, y, 0, stop, solve.steps));
    }

    if (opt.json) {
        Document doc;
        doc["kind"] = "solution";
        doc["order"] = n;
        doc["dim"] = m;
        doc["base_point"] = format_rational(sys.base_point());
        doc["q"] = jet_to_document(v.q->truncated(std::min(v.q->order(), v.order)));
        doc["u"] = jet_to_document(basis.u);
        doc["v"] = jet_to_document(basis.v);
        doc["gauge"] = matrix_jet_to_document(v.gauge);
        Document sols = Document::array();
        for (const auto& y : solutions) {
            Document comp = Document::array();
            for (const auto& c : y)
                comp.push_back(jet_to_document(c));
            sols.push_back(std::move(comp));
        }
        doc["solutions"] = std::move(sols);
        Document res;
        res["truncation"] = res_order;
        res["zero_through"] = zero_through;
        res["zero"] = zero;
        doc["residual"] = std::move(res);
        if (defect) {
            Document num;
            num["interval"] = Document::array({"0", format_rational(stop)});
            num["steps"] = solve.steps;
            num["max_defect"] = *defect;
            num["threshold"] = threshold;
            num["passed"] = *defect < threshold;
            doc["numeric_check"] = std::move(num);
        }
        out << print_document(doc);
        return exit_ok;
    }
    out << "canonical class to order " << v.order << "; " << solutions.size() << " fundamental solutions y = Q (e_i u^(n-j) v^(j-1))\n";
    out << "q = " << format_jet(v.q->truncated(std::min(v.q->order(), v.order))) << "\n";
    out << "u = " << format_jet(basis.u) << "\n";
    out << "v = " << format_jet(basis.v) << "\n";
    out << "residual: " << (zero ? "zero" : "NONZERO") << " through order " << zero_through << " (tracked "
        << res_order << ")\n";
    if (defect) {
        std::ostringstream num;
        num.precision(3);
        num << std::scientific << *defect;
        out << "numeric check on [0, " << format_rational(stop) << "], " << solve.steps
            << " steps: max defect " << num.str() << (*defect < threshold ? " (pass)" : " (FAIL)") << "\n";
    }
    return exit_ok;
}

struct GenerateOptions {
    int n = 0;
    std::size_t m = 1;
    std::vector<std::string> q;
    std::vector<std::string> r;
};

inline Jet jet_from_strings(const std::vector<std::string>& values, const std::string& flag, int order)
{
    Document list = Document::array();
    for (const auto& v : values)
        list.push_back(v);
    return detail::read_jet(list, flag, order, 0);
}

inline int cmd_generate(const CommonOptions& opt, const GenerateOptions& gen, std::istream& in, std::ostream& out)
{
    SourceData source;
    if (!opt.input.empty()) {
        if (!gen.q.empty() || !gen.r.empty())
            throw DocumentError("give the source either with --input or with --q/--r, not both");
        source = source_from_document(load(opt.input, in), opt.order);
    } else {
        const int order = opt.order.value_or(default_truncation);
        if (gen.q.empty() == gen.r.empty())
            throw DocumentError("generate needs exactly one of --q, --r or --input");
        if (!gen.q.empty())
            source.q = jet_from_strings(gen.q, "--q", order);
        else
            source.r = jet_from_strings(gen.r, "--r", order);
    }
    const LinearSystem sys =
        source.q ? build_iterative_normal(gen.n, *source.q, gen.m) : build_iterative_from_r(gen.n, *source.r, gen.m);
    out << print_document(system_to_document(sys));
    return exit_ok;
}

/// Runs one command line (without the program name) and returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in = std::cin)
{
    CLI::App app{"Exact jet computations for linear iterative systems and their canonical class", "itercanon"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "itercanon 1.0");

    CommonOptions common;
    std::string transform_path;
    int power = 0;
    SolveOptions solve;
    GenerateOptions gen;

    auto add_common = [&](CLI::App* sub, bool input_required) {
        auto* input = sub->add_option("--input,-i", common.input, "input document (- for stdin)");
        if (input_required)
            input->required();
        sub->add_option("--order", common.order, "truncation order override")->check(CLI::NonNegativeNumber);
        sub->add_flag("--json", common.json, "machine-readable output");
    };

    auto* iterate_cmd = app.add_subcommand("iterate", "expand Psi^n for an operator document");
    add_common(iterate_cmd, true);
    iterate_cmd->add_option("-n,--power", power, "iteration count")->required()->check(CLI::NonNegativeNumber);

    auto* normalize_cmd = app.add_subcommand("normalize", "normal form and gauge of a system");
    add_common(normalize_cmd, true);

    auto* check_cmd = app.add_subcommand("check", "canonical-class test of a system");
    add_common(check_cmd, true);

    auto* transform_cmd = app.add_subcommand("transform", "push a system forward by a point transformation");
    add_common(transform_cmd, true);
    transform_cmd->add_option("--transform,-t", transform_path, "transformation document")->required();

    auto* solve_cmd = app.add_subcommand("solve", "superposition solutions of a canonical-class system");
    add_common(solve_cmd, true);
    solve_cmd->add_flag("--numeric-check", solve.numeric_check, "cross-check by numeric integration on [0, 1/2]");
    solve_cmd->add_option("--steps", solve.steps, "integration steps")->check(CLI::PositiveNumber);

    auto* generate_cmd = app.add_subcommand("generate", "iterative system from source data");
    add_common(generate_cmd, false);
    generate_cmd->add_option("-n", gen.n, "equation order")->required()->check(CLI::PositiveNumber);
    generate_cmd->add_option("-m", gen.m, "system dimension")->check(CLI::PositiveNumber);
    generate_cmd->add_option("--q", gen.q, "source coefficient q as p/q list")->delimiter(',');
    generate_cmd->add_option("--r", gen.r, "parameter r as p/q list")->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "itercanon: " << e.what() << "\n";
        return exit_parse_error;
    }

    try {
        if (*iterate_cmd)
            return cmd_iterate(common, power, in, out);
        if (*normalize_cmd)
            return cmd_normalize(common, in, out);
        if (*check_cmd)
            return cmd_check(common, in, out);
        if (*transform_cmd)
            return cmd_transform(common, transform_path, in, out);
        if (*solve_cmd)
            return cmd_solve(common, solve, in, out);
        return cmd_generate(common, gen, in, out);
    } catch (const DocumentError& e) {
        err << "itercanon: parse error: " << e.what() << "\n";
        return exit_parse_error;
    } catch (const Error& e) {
        err << "itercanon: " << e.what() << "\n";
        return exit_domain_error;
    } catch (const std::exception& e) {
        err << "itercanon: " << e.what() << "\n";
        return exit_domain_error;
    }
}

} // namespace itercanon::cli
