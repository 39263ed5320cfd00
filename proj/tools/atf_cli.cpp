/**
 * @brief Command-line front end: count, orbital, tree, intersect, verify.
 *
 * Exit codes: 0 success (all rows pass), 1 verification failure, 2 usage error,
 * 3 internal invariant violation (precision, ledger, certificate).
 */
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "atf/atf.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace atf;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

/** Writes to the --output file when given, else to standard output. */
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string bool_text(bool b) { return b ? "true" : "false"; }

int run_count(int q, int amax, std::uint64_t seed, Sink& sink) {
    const auto rows = pair_count_comparison(q, amax, seed);
    std::ostream& os = sink.out();
    os << "a,b,k,case,formula,brute,match\n";
    bool all = true;
    for (const CountRow& r : rows) {
        os << r.a << ',' << r.b << ',' << r.k << ',' << case_name(r.c) << ',' << r.formula << ',' << r.brute << ','
           << bool_text(r.match()) << '\n';
        all = all && r.match();
    }
    return all ? kExitOk : kExitFail;
}

int run_orbital(int q, const NumInvariant& inv, const std::string& fn_text, bool brute, Sink& sink) {
    const TestFn fn = parse_fn(fn_text);
    if (!inv.valid()) throw UsageError("invalid numerical invariant " + inv.to_string());
    LaurentPoly p;
    if (brute) {
        const LocalField& F = LocalField::get(q, std::max(32, 4 * (std::abs(inv.r) + std::abs(inv.d2) + 8)));
        const QuadAlgebra L(inv.kind, F);
        p = orbital_brute(fn, element_from_invariant(L, inv)).total;
    } else {
        p = orbital_closed(fn, inv, q);
    }
    json j;
    j["inv"] = inv.to_string();
    j["q"] = q;
    j["fn"] = fn_name(fn);
    j["source"] = brute ? "brute" : "closed";
    j["poly"] = p.to_string();
    j["central"] = rational_to_string(p.central_value());
    j["dcoeff"] = rational_to_string(p.central_derivative_coeff());
    const bool feq = functional_equation_check(fn, inv, p);
    j["feq_ok"] = feq;
    sink.out() << j.dump(2) << '\n';
    return feq ? kExitOk : kExitFail;
}

int run_tree(int q, const NumInvariant& inv, bool edges, const std::string& format, Sink& sink) {
    const TreeWindow W = explore_invariant(inv, q);
    const ShapeDescriptor shape = classify_shape(W);
    const ShapeDescriptor pred = predicted_shape(inv);
    const bool law = distance_law_check(W);
    const int census_max = std::min(W.radius, 3);
    std::vector<Count> census, formula;
    for (int k = 0; k <= census_max; ++k) {
        census.push_back(ball_census(W, k));
        formula.push_back(ball_count(shape, k, q));
    }
    const bool ok = shape == pred && W.m == max_multiplicity(inv) && law && census == formula;
    std::ostream& os = sink.out();
    if (format == "json") {
        json j;
        j["inv"] = inv.to_string();
        j["q"] = q;
        j["quotient"] = W.quotient;
        j["shape"] = shape.to_string();
        j["predicted_shape"] = pred.to_string();
        j["m"] = W.m;
        j["predicted_m"] = max_multiplicity(inv);
        j["T_size"] = W.T.size();
        j["window_radius"] = W.radius;
        j["window_size"] = W.size();
        j["distance_law"] = law;
        j["ball_census"] = census;
        j["ball_formula"] = formula;
        j["pass"] = ok;
        if (edges) {
            json e = json::array();
            for (std::size_t i = 0; i < W.size(); ++i)
                for (int nb : W.nbr_index[i])
                    if (nb > static_cast<int>(i)) e.push_back({i, nb});
            j["edges"] = e;
        }
        os << j.dump(2) << '\n';
    } else {
        os << "inv,q,quotient,shape,predicted_shape,m,predicted_m,T_size,window_radius,window_size,distance_law";
        for (int k = 0; k <= census_max; ++k) os << ",ball" << k << "_census,ball" << k << "_formula";
        os << ",pass\n";
        os << inv.to_string() << ',' << q << ',' << bool_text(W.quotient) << ',' << shape.to_string() << ','
           << pred.to_string() << ',' << W.m << ',' << max_multiplicity(inv) << ',' << W.T.size() << ',' << W.radius
           << ',' << W.size() << ',' << bool_text(law);
        for (int k = 0; k <= census_max; ++k) os << ',' << census[k] << ',' << formula[k];
        os << ',' << bool_text(ok) << '\n';
        if (edges) {
            os << "\nvertex,lattice,n,distance\n";
            for (std::size_t i = 0; i < W.size(); ++i)
                os << i << ",\"" << W.vertices[i].to_string() << "\"," << W.n[i] << ',' << W.dist[i] << '\n';
            os << "\nsource,target\n";
            for (std::size_t i = 0; i < W.size(); ++i)
                for (int nb : W.nbr_index[i])
                    if (nb > static_cast<int>(i)) os << i << ',' << nb << '\n';
        }
    }
    return ok ? kExitOk : kExitFail;
}

int run_intersect(int q, const NumInvariant& inv, const std::string& lambda_text, bool geometric, Sink& sink) {
    const Hasse lambda = parse_hasse(lambda_text);
    const Count closed = int_closed(lambda, inv, q);
    json j;
    j["inv"] = inv.to_string();
    j["q"] = q;
    j["lambda"] = hasse_name(lambda);
    j["closed"] = closed;
    bool ok = true;
    if (geometric) {
        const IntResult r = int_geometric(lambda, inv, q);
        json b;
        b["value"] = r.value;
        b["int0"] = r.int0;
        b["doubling"] = r.doubling;
        if (lambda == Hasse::Quarter) {
            b["pure_sum"] = r.pure_sum;
            b["artinian"] = r.artinian;
            b["nonzero_outside_T"] = r.nonzero_outside_T;
        } else {
            b["reduced_int0"] = r.reduced_int0;
            b["N"] = r.N;
            b["T_size"] = r.T_size;
            b["boundary"] = r.boundary;
            b["core_length"] = r.core_length;
            b["reduced_artinian"] = r.reduced_artinian;
            b["assembly_direct"] = r.assembly_direct;
            b["assembly_ledger"] = r.assembly_ledger;
        }
        j["geometric"] = b;
        ok = r.value == closed;
        j["agree"] = ok;
    }
    sink.out() << j.dump(2) << '\n';
    return ok ? kExitOk : kExitFail;
}

json report_json(const VerifyReport& r) {
    json j;
    j["check"] = r.check;
    j["inv"] = r.inv.to_string();
    j["q"] = r.q;
    j["lambda"] = r.lambda_name();
    j["lhs_dcoeff"] = r.lhs_dcoeff;
    j["correction_coeff"] = r.correction_coeff;
    j["rhs"] = r.rhs;
    j["matched"] = r.matched;
    j["pass"] = r.pass;
    j["orbital_source"] = source_name(r.orbital_source);
    j["int_source"] = source_name(r.int_source);
    j["note"] = r.note;
    return j;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) o += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return o + "\"";
}

int run_verify(const SweepOptions& opt, const std::string& format, bool verbose, Sink& sink) {
    if (verbose) std::cerr << "verify: running sweep\n";
    const auto rows = sweep(opt);
    const std::size_t pass = count_passing(rows);
    std::ostream& os = sink.out();
    if (format == "json") {
        json j;
        j["rows"] = json::array();
        for (const auto& r : rows) j["rows"].push_back(report_json(r));
        j["summary"] = {{"rows", rows.size()}, {"pass", pass}, {"fail", rows.size() - pass}};
        os << j.dump(2) << '\n';
    } else if (format == "md") {
        os << "| check | q | inv | lambda | lhs | correction | rhs | matched | orbital | int | result |\n";
        os << "|---|---|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& r : rows)
            os << "| " << r.check << " | " << r.q << " | " << r.inv.to_string() << " | " << r.lambda_name() << " | "
               << r.lhs_dcoeff << " | " << r.correction_coeff << " | " << r.rhs << " | " << bool_text(r.matched) << " | "
               << source_name(r.orbital_source) << " | " << source_name(r.int_source) << " | "
               << (r.pass ? "pass" : "FAIL") << " |\n";
        os << "\n" << pass << " of " << rows.size() << " rows pass\n";
    } else {
        os << "check,q,inv,lambda,lhs_dcoeff,correction_coeff,rhs,matched,orbital_source,int_source,result,note\n";
        for (const auto& r : rows)
            os << r.check << ',' << r.q << ',' << r.inv.to_string() << ',' << r.lambda_name() << ',' << r.lhs_dcoeff
               << ',' << r.correction_coeff << ',' << r.rhs << ',' << bool_text(r.matched) << ','
               << source_name(r.orbital_source) << ',' << source_name(r.int_source) << ','
               << (r.pass ? "pass" : "fail") << ',' << csv_escape(r.note) << '\n';
        os << "# summary: " << pass << " of " << rows.size() << " rows pass\n";
    }
    return pass == rows.size() ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification of orbital-integral identities and intersection numbers"};
    app.require_subcommand(1);
    std::string output;
    bool verbose = false;
    app.add_option("--output", output, "Write the result to this file instead of standard output");
    app.add_flag("-v,--verbose", verbose, "Progress messages on standard error");

    int q = 2;
    std::string inv_text;

    auto* count = app.add_subcommand("count", "Closed-form lattice pair counts against enumeration (CSV)");
    int amax = 3;
    std::uint64_t seed = 1;
    count->add_option("--q", q, "Residue field size")->required();
    count->add_option("--amax", amax, "Largest elementary divisor b (0 <= a <= b <= amax)")->check(CLI::Range(0, 6));
    count->add_option("--seed", seed, "Seed for the random unimodular conjugations");

    auto* orbital = app.add_subcommand("orbital", "Orbital integral of a test function (JSON)");
    std::string fn = "par";
    bool brute = false;
    orbital->add_option("--q", q, "Residue field size")->required();
    orbital->add_option("--inv", inv_text, "Numerical invariant kind:r:d2")->required();
    orbital->add_option("--fn", fn, "Test function: par, iw or d");
    orbital->add_flag("--brute", brute, "Evaluate by lattice enumeration instead of the closed form");

    auto* tree = app.add_subcommand("tree", "Shape of the maximum locus of n(z, -) in the tree");
    bool edges = false;
    std::string tree_format = "csv";
    tree->add_option("--q", q, "Residue field size")->required();
    tree->add_option("--inv", inv_text, "Numerical invariant kind:r:d2")->required();
    tree->add_flag("--edges", edges, "Also print the explored vertices and edges");
    tree->add_option("--out", tree_format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* intersect = app.add_subcommand("intersect", "Intersection number Int(g) (JSON)");
    std::string lambda = "1/4";
    bool geometric = false;
    intersect->add_option("--q", q, "Residue field size")->required();
    intersect->add_option("--lambda", lambda, "Hasse invariant 1/4 or 3/4")->check(CLI::IsMember({"1/4", "3/4"}));
    intersect->add_option("--inv", inv_text, "Numerical invariant kind:r:d2")->required();
    intersect->add_flag("--geometric", geometric, "Also run the geometric recipe and compare");

    auto* verify = app.add_subcommand("verify", "Fundamental lemma and transfer identities over a range");
    std::vector<int> qs{2, 3};
    int rmax = 6, rmin = -2, d2max = 4;
    std::string lambdas = "both", format = "csv";
    bool no_brute = false, no_geometric = false;
    verify->add_option("--q", qs, "Residue field sizes (comma separated)")->delimiter(',');
    verify->add_option("--rmax", rmax, "Largest r");
    verify->add_option("--rmin", rmin, "Smallest r");
    verify->add_option("--d2max", d2max, "Bound on |2d|")->check(CLI::NonNegativeNumber);
    verify->add_option("--lambda", lambdas, "1/4, 3/4 or both")->check(CLI::IsMember({"1/4", "3/4", "both"}));
    verify->add_option("--out", format, "Output format")->check(CLI::IsMember({"csv", "json", "md"}));
    verify->add_flag("--no-brute", no_brute, "Skip the lattice-enumeration orbitals");
    verify->add_flag("--no-geometric", no_geometric, "Skip the geometric intersection recipe");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Sink sink(output);
        if (*count) return run_count(q, amax, seed, sink);
        if (*orbital) return run_orbital(q, NumInvariant::parse(inv_text), fn, brute, sink);
        if (*tree) return run_tree(q, NumInvariant::parse(inv_text), edges, tree_format, sink);
        if (*intersect) return run_intersect(q, NumInvariant::parse(inv_text), lambda, geometric, sink);
        if (*verify) {
            SweepOptions opt;
            opt.qs = qs;
            opt.r_min = rmin;
            opt.r_max = rmax;
            opt.d2_min = -d2max;
            opt.d2_max = d2max;
            opt.brute = !no_brute;
            opt.geometric = !no_geometric;
            if (lambdas == "1/4") opt.lambdas = {Hasse::Quarter};
            else if (lambdas == "3/4") opt.lambdas = {Hasse::ThreeQuarter};
            for (int x : qs) LocalField::prime_power(x);
            return run_verify(opt, format, verbose, sink);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
