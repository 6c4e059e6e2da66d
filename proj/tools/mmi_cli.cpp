// Command-line front end: compute invariants of finite metric measure
// spaces, sweep alpha-curves, run verification campaigns, and emit CSV
// tables for the concentration demonstration.
//
// Exit codes: 0 success, 1 verification inconsistency, 2 validation error,
// 3 size cap exceeded, 4 monotonicity violation in a sweep.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmi/diameters.hpp"
#include "mmi/harness.hpp"
#include "mmi/io.hpp"
#include "mmi/obsdiam.hpp"
#include "mmi/spaces.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInconsistent = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCap = 3;
constexpr int kExitMonotonicity = 4;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

bool cap_override() { return std::getenv("MMI_CAP_OVERRIDE") != nullptr; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mmi::ParseError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct LoadedSpace {
    mmi::FiniteMMSpace space;
    std::string digest;
};

LoadedSpace load_input(const std::string& path) {
    std::string bytes = slurp(path);
    mmi::Json doc;
    try {
        doc = mmi::Json::parse(bytes);
    } catch (const std::exception& e) {
        throw mmi::ParseError(std::string("invalid JSON: ") + e.what());
    }
    return LoadedSpace{mmi::parse_space_document(doc), mmi::digest(bytes)};
}

void write_or_print(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw mmi::ParseError("cannot open output file: " + out);
    f << text;
}

struct ComputeOutcome {
    std::string value;       // printable value ("inf" allowed)
    std::string solve_mode;  // exact | lower-bound | heuristic
    std::vector<std::string> caps_hit;
    bool uncertified = false;
};

ComputeOutcome compute_invariant(const mmi::FiniteMMSpace& X, const std::string& invariant,
                                 const std::string& alpha_str, const std::string& abar_str,
                                 const std::string& mode, std::uint64_t seed) {
    using mmi::Mass;
    ComputeOutcome out;
    out.solve_mode = "exact";
    const bool heuristic = (mode == "heuristic");

    auto need_alpha = [&]() {
        if (alpha_str.empty()) throw mmi::ParseError("--alpha is required for " + invariant);
        return mmi::mass_from_string(alpha_str);
    };
    auto need_abar = [&]() {
        if (abar_str.empty()) throw mmi::ParseError("--abar is required for " + invariant);
        std::vector<Mass> parts;
        std::stringstream ss(abar_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) parts.push_back(mmi::mass_from_string(tok));
        return mmi::AlphaVector(parts);
    };
    auto extended = [&](const mmi::ExtendedReal& v) {
        out.value = v.infinite ? std::string("inf") : fmt(v.value);
    };

    if (invariant == "diam") {
        out.value = fmt(X.diameter());
    } else if (invariant == "max-atom") {
        out.value = mmi::mass_to_string(X.max_atom());
    } else if (invariant == "partial-diameter") {
        out.value = fmt(mmi::partial_diameter(X, need_alpha()));
    } else if (invariant == "obsdiam") {
        Mass alpha = need_alpha();
        if (heuristic) {
            out.value = fmt(mmi::obsdiam_lower(X, alpha, 16, seed).value);
            out.solve_mode = "heuristic";
        } else if (X.support().size() > mmi::kObsExactCap && cap_override()) {
            out.value = fmt(mmi::obsdiam_lower(X, alpha, 16, seed).value);
            out.solve_mode = "lower-bound";
            out.caps_hit.push_back("obsdiam-exact");
            out.uncertified = true;
        } else {
            out.value = fmt(mmi::detail::obsdiam_value_closed(X, alpha));
        }
    } else if (invariant == "obsdiam-aggregate") {
        out.value = fmt(mmi::obsdiam_aggregate(X));
    } else if (invariant == "multi-partial-diameter") {
        extended(mmi::multi_partial_diameter(X, need_abar()));
    } else if (invariant == "underline-diam") {
        extended(mmi::underline_diam(X, need_abar()));
    } else if (invariant == "diam-doubleprime") {
        out.value = fmt(mmi::diam_doubleprime(X, need_abar()));
    } else if (invariant == "underline-obsdiam") {
        auto r = mmi::underline_obsdiam(X, need_abar());
        out.value = fmt(r.value);
        if (r.mode == mmi::ObsResult::Mode::LowerBound) out.solve_mode = "lower-bound";
    } else if (invariant == "obsdiam-doubleprime") {
        auto r = mmi::obsdiam_doubleprime(X, need_abar());
        out.value = fmt(r.value);
        if (r.mode == mmi::ObsResult::Mode::LowerBound) out.solve_mode = "lower-bound";
    } else {
        throw mmi::ParseError("unknown invariant: " + invariant);
    }
    return out;
}

int cmd_compute(const std::string& input, const std::string& invariant,
                const std::string& alpha_str, const std::string& abar_str, const std::string& mode,
                std::uint64_t seed, const std::string& out_path) {
    auto loaded = load_input(input);
    auto t0 = std::chrono::steady_clock::now();
    auto res = compute_invariant(loaded.space, invariant, alpha_str, abar_str, mode, seed);
    auto t1 = std::chrono::steady_clock::now();

    mmi::RunManifest man;
    man.command = "compute " + invariant;
    man.input_digest = loaded.digest;
    man.seed = seed;
    man.mode = mode;
    man.caps_hit = res.caps_hit;
    man.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    man.uncertified = res.uncertified || cap_override();

    std::cout << res.value << "\n";
    if (!out_path.empty()) {
        mmi::Json doc;
        doc["invariant"] = invariant;
        doc["value"] = res.value;
        doc["solve_mode"] = res.solve_mode;
        doc["manifest"] = man.to_json();
        write_or_print(out_path, doc.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_sweep(const std::string& input, const std::string& invariant, const std::string& grid,
              const std::string& mode, std::uint64_t seed, const std::string& out_path) {
    using mmi::Mass;
    auto loaded = load_input(input);
    const auto& X = loaded.space;

    std::vector<Mass> alphas;
    if (grid == "breakpoints") {
        // Grid = the partial sums of atom masses (heaviest first): exactly
        // the alpha values where partial/observable diameters can jump.
        Mass acc = 0;
        for (const auto& [idx, m] : mmi::atoms(X)) {
            (void)idx;
            acc += m;
            if (acc > 0 && acc <= 1 && (alphas.empty() || acc != alphas.back()))
                alphas.push_back(acc);
        }
        if (alphas.empty()) alphas.push_back(Mass(1));
    } else {
        std::stringstream ss(grid);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
            throw mmi::ParseError("--grid must be start:stop:step or 'breakpoints'");
        Mass start = mmi::mass_from_string(a), stop = mmi::mass_from_string(b),
             step = mmi::mass_from_string(c);
        if (step <= 0 || start <= 0 || stop > 1 || start > stop)
            throw mmi::ParseError("--grid requires 0 < start <= stop <= 1 and step > 0");
        for (Mass v = start; v <= stop; v += step) alphas.push_back(v);
    }

    const bool heuristic = (mode == "heuristic");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<Mass, double>> rows;
    for (const Mass& a : alphas) {
        double v = 0.0;
        if (invariant == "partial-diameter") {
            v = mmi::partial_diameter(X, a);
        } else if (invariant == "obsdiam") {
            v = heuristic ? mmi::obsdiam_lower(X, a, 16, seed).value
                          : mmi::detail::obsdiam_value_closed(X, a);
        } else {
            throw mmi::ParseError("sweep supports invariants partial-diameter and obsdiam");
        }
        rows.emplace_back(a, v);
    }
    auto t1 = std::chrono::steady_clock::now();

    // Both supported invariants are nondecreasing in alpha; a violation
    // indicates a solver bug and must abort the run.
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].second < rows[i - 1].second - 1e-9) {
            std::cerr << "monotonicity violation at alpha=" << mmi::mass_to_string(rows[i].first)
                      << ": " << fmt(rows[i].second) << " < " << fmt(rows[i - 1].second) << "\n";
            return kExitMonotonicity;
        }
    }

    mmi::RunManifest man;
    man.command = "sweep " + invariant;
    man.input_digest = loaded.digest;
    man.seed = seed;
    man.mode = mode;
    man.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    man.uncertified = cap_override();

    std::ostringstream csv;
    csv << "# manifest: " << man.to_json().dump() << "\n";
    csv << "alpha,value,mode\n";
    for (const auto& [a, v] : rows)
        csv << mmi::mass_to_string(a) << "," << fmt(v) << ","
            << (heuristic ? "heuristic" : "exact") << "\n";
    write_or_print(out_path, csv.str());
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::size_t count, std::uint64_t seed,
               const std::string& mode, const std::string& out_path) {
    auto t0 = std::chrono::steady_clock::now();
    auto res = mmi::harness::run_suite(suite, count, seed);
    auto t1 = std::chrono::steady_clock::now();

    mmi::RunManifest man;
    man.command = "verify " + suite;
    man.input_digest = mmi::digest(suite + "/" + std::to_string(count));
    man.seed = seed;
    man.mode = mode;
    man.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    man.uncertified = cap_override();

    mmi::Json doc;
    doc["suite"] = res.suite;
    doc["count"] = res.count;
    doc["failures"] = res.failures;
    doc["counterexamples"] = res.counterexamples;
    doc["manifest"] = man.to_json();
    std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_or_print(out_path, text);
        std::cout << res.suite << ": " << res.failures << " failures / " << res.count
                  << " instances\n";
    }
    return res.ok() ? kExitOk : kExitInconsistent;
}

int cmd_levy(const std::string& n_list, const std::string& radius_rule, double radius,
             const std::string& alpha_str, std::size_t samples, std::uint64_t seed,
             const std::string& mode, const std::string& out_path) {
    std::vector<std::size_t> dims;
    {
        std::stringstream ss(n_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) dims.push_back(std::stoul(tok));
        if (dims.empty()) throw mmi::ParseError("--n must list at least one dimension");
    }
    mmi::Mass alpha = mmi::mass_from_string(alpha_str);
    if (radius_rule != "const" && radius_rule != "sqrtn")
        throw mmi::ParseError("--radius-rule must be const or sqrtn");

    auto t0 = std::chrono::steady_clock::now();
    std::vector<mmi::harness::LevyRow> rows;
    for (std::size_t n : dims) {
        double r = (radius_rule == "sqrtn") ? radius * std::sqrt(static_cast<double>(n)) : radius;
        rows.push_back(mmi::harness::levy_row(n, r, samples, alpha, seed));
    }
    auto t1 = std::chrono::steady_clock::now();

    mmi::RunManifest man;
    man.command = "levy";
    man.input_digest = mmi::digest(n_list + "/" + radius_rule + "/" + alpha_str + "/" +
                                   std::to_string(samples));
    man.seed = seed;
    man.mode = mode;
    man.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    man.uncertified = cap_override();

    std::ostringstream csv;
    csv << "# manifest: " << man.to_json().dump() << "\n";
    csv << "n,obsdiam_lower,partial_estimate\n";
    for (const auto& row : rows)
        csv << row.n << "," << fmt(row.obsdiam_lower) << "," << fmt(row.partial_estimate) << "\n";
    write_or_print(out_path, csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariants of finite metric measure spaces"};
    app.require_subcommand(1);

    std::string input, invariant, alpha_str, abar_str, out_path, grid = "breakpoints";
    std::string mode = "exact", suite, n_list = "2,4,8,16,32", radius_rule = "const";
    std::uint64_t seed = 7;
    std::size_t count = 0;  // 0 = per-command default (verify 100, levy 400)
    double radius = 1.0;
    alpha_str = "1/2";

    auto add_common = [&](CLI::App* c) {
        c->add_option("--seed", seed, "random seed");
        c->add_option("--mode", mode, "exact|heuristic|rational")
            ->check(CLI::IsMember({"exact", "heuristic", "rational"}));
        c->add_option("--out", out_path, "output file path");
    };

    auto* comp = app.add_subcommand("compute", "compute one invariant");
    comp->add_option("--input", input, "space document (JSON)")->required();
    comp->add_option("--invariant", invariant, "invariant name")->required();
    comp->add_option("--alpha", alpha_str, "alpha (decimal or p/q)");
    comp->add_option("--abar", abar_str, "comma list of alphas");
    add_common(comp);

    auto* sw = app.add_subcommand("sweep", "alpha sweep to CSV");
    sw->add_option("--input", input, "space document (JSON)")->required();
    sw->add_option("--invariant", invariant, "partial-diameter|obsdiam")->required();
    sw->add_option("--grid", grid, "start:stop:step or 'breakpoints'");
    add_common(sw);

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", suite,
                    "mt1|mt2|section6|metrics-inequalities|sandwich|lsc")
        ->required();
    ver->add_option("--count", count, "number of instances");
    add_common(ver);

    auto* lev = app.add_subcommand("levy", "sphere concentration table");
    lev->add_option("--n", n_list, "comma list of sphere dimensions");
    lev->add_option("--radius-rule", radius_rule, "const|sqrtn");
    lev->add_option("--radius", radius, "radius (scale for sqrtn)");
    lev->add_option("--alpha", alpha_str, "alpha (decimal or p/q)");
    lev->add_option("--count", count, "samples per sphere");
    add_common(lev);

    CLI11_PARSE(app, argc, argv);

    try {
        if (comp->parsed())
            return cmd_compute(input, invariant, alpha_str, abar_str, mode, seed, out_path);
        if (sw->parsed()) return cmd_sweep(input, invariant, grid, mode, seed, out_path);
        if (ver->parsed())
            return cmd_verify(suite, count == 0 ? 100 : count, seed, mode, out_path);
        if (lev->parsed())
            return cmd_levy(n_list, radius_rule, radius, alpha_str, count == 0 ? 400 : count,
                            seed, mode, out_path);
    } catch (const mmi::SizeLimitExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
