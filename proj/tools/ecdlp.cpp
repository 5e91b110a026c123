#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecdlp/ecdlp.hpp"

using namespace ecdlp;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kAcceptance = 3;
constexpr int kIo = 4;

// Floor on the probability mass of the true logarithm for `shor` to report success.
constexpr double kRecoveryFloor = 0.25;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CurveArgs {
    std::int64_t p = 7, a = 5, b = 4;
    std::string G = "3,2", P = "0,2", p0 = "2,6";
    std::string inversion = "gidney";

    void add(CLI::App& cmd, bool with_points = true) {
        cmd.add_option("--p", p, "field prime")->capture_default_str();
        cmd.add_option("--a", a, "curve coefficient a")->capture_default_str();
        cmd.add_option("--b", b, "curve coefficient b")->capture_default_str();
        if (with_points) {
            cmd.add_option("--G", G, "generator \"x,y\"")->capture_default_str();
            cmd.add_option("--P", P, "target point \"x,y\"")->capture_default_str();
            cmd.add_option("--p0", p0, "initial point of the point register")->capture_default_str();
            cmd.add_option("--inversion", inversion, "adder inside the inversions")
                ->check(CLI::IsMember({"gidney", "cuccaro"}))
                ->capture_default_str();
        }
    }

    Curve curve() const { return curve_new(p, a, b); }

    Point point(const Curve& c, const std::string& text) const {
        Point pt = parse_point(text);
        if (!is_on_curve(c, pt)) throw UsageError(pt.to_string() + " is not on the curve");
        return pt;
    }

    BenchSetup setup() const {
        Curve c = curve();
        BenchSetup s{c, point(c, G), point(c, P), point(c, p0)};
        s.opt.inversion = inversion == "cuccaro" ? Adder::cuccaro : Adder::gidney;
        return s;
    }
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("ECDLP_FORGE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("ECDLP_FORGE_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

std::string fmt_pct(double v) {
    std::ostringstream os;
    os << std::showpos << std::fixed << std::setprecision(1) << v << "%";
    return os.str();
}

json point_json(const Point& pt) {
    if (pt.is_infinity()) return "inf";
    return json::array({pt.x(), pt.y()});
}

int cmd_invert(std::int64_t p, std::int64_t v, bool quantum, std::optional<std::uint64_t> seed, bool as_json) {
    if (p < 3 || !is_prime(p)) throw UsageError("--p must be an odd prime");
    if (v < 1 || v >= p) throw UsageError("--v must lie in [1, p)");
    json out{{"p", p}, {"v", v}, {"path", quantum ? "quantum" : "classical"}};
    std::int64_t inv = 0;
    if (quantum) {
        Circuit c;
        ModReg reg = alloc_modreg(c, p, "v");
        QReg m = c.alloc_register(static_cast<std::size_t>(kaliski_rounds(p)), "m");
        for (std::size_t i = 0; i < reg.size(); ++i) {
            if ((v >> i) & 1) c.x(reg[i]);
        }
        kaliski_quantum(c, Adder::gidney, reg, m);
        // Strict Dealloc: any dirty ancilla raises DeallocNonZero.
        RunResult r = run(c, seed.value_or(default_seed()));
        inv = static_cast<std::int64_t>(r.state.basis_value(reg.reg));
        out["qubits"] = c.peak_live();
        out["ancillas_clean"] = true;
    } else {
        inv = kaliski_classical(v, p);
    }
    out["inverse"] = inv;
    if (as_json) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << inv << "\n";
        if (quantum) std::cout << "ancillas clean\n";
    }
    return kOk;
}

int cmd_ecadd(const CurveArgs& ca, const std::string& point, const std::string& add_point, std::optional<int> ctrl,
              bool as_json) {
    Curve c = ca.curve();
    Point Q = ca.point(c, point);
    Point A = ca.point(c, add_point);
    if (is_exceptional_addition(c, Q, A)) {
        throw UsageError("exceptional input " + Q.to_string() + " + " + A.to_string() +
                         " (doubling, inverse pair, neutral element or result at +-A)");
    }
    Circuit circ;
    EcPointRegs pt = alloc_point(circ, c.p);
    load_point(circ, pt, Q);
    Ctrl q;
    if (ctrl) {
        q = circ.alloc_qubit("ctrl");
        if (*ctrl) circ.x(*q);
    }
    ell_add_inpl(circ, pt, A, q);
    RunResult r = run(circ, default_seed());
    Point got(static_cast<std::int64_t>(r.state.basis_value(pt.x.reg)),
              static_cast<std::int64_t>(r.state.basis_value(pt.y.reg)));
    Point want = (ctrl && *ctrl == 0) ? Q : ec_add(c, Q, A);
    const bool agree = got == want;
    if (as_json) {
        json out{{"point", point_json(Q)}, {"add_point", point_json(A)}, {"result", point_json(got)},
                 {"oracle", point_json(want)}, {"agree", agree}};
        if (ctrl) out["ctrl"] = *ctrl;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << got << (agree ? "  (matches classical)" : "  (MISMATCH, classical " + want.to_string() + ")") << "\n";
    }
    return agree ? kOk : kAcceptance;
}

int cmd_bench(const CurveArgs& ca, const std::string& routine, const std::string& format) {
    BenchSetup s = ca.setup();
    std::vector<Routine> which;
    if (routine.empty()) {
        which.assign(kAllRoutines.begin(), kAllRoutines.end());
    } else {
        which.push_back(*parse_routine(routine));
    }
    // Reference figures only apply to the published curve.
    const bool reference_curve = s.curve == Curve{7, 5, 4};
    std::vector<BenchRow> rows;
    for (auto r : which) rows.push_back(bench_routine(r, s));

    if (format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& row = rows[i];
            json j{{"routine", row.routine},     {"qubit_count", row.qubit_count}, {"t_count", row.t_count},
                   {"cx_count", row.cx_count.value()}, {"t_depth", row.t_depth}, {"depth", row.depth}};
            if (reference_curve) {
                ReferenceRow ref = reference_row(which[i]);
                const double ref_cx = static_cast<double>(ref.cx_halves) / 2.0;
                j["reference"] = {{"qubit_count", ref.qubit_count}, {"t_count", ref.t_count},
                                  {"cx_count", ref_cx}, {"t_depth", ref.t_depth}};
                j["deviation_percent"] = {
                    {"qubit_count", percent_dev(static_cast<double>(row.qubit_count), static_cast<double>(ref.qubit_count))},
                    {"t_count", percent_dev(static_cast<double>(row.t_count), static_cast<double>(ref.t_count))},
                    {"cx_count", percent_dev(row.cx_count.value(), ref_cx)},
                    {"t_depth", percent_dev(static_cast<double>(row.t_depth), static_cast<double>(ref.t_depth))}};
            }
            arr.push_back(j);
        }
        std::cout << json{{"inversion", ca.inversion}, {"rows", arr}}.dump(2) << "\n";
        return kOk;
    }
    if (format == "csv") {
        std::cout << "routine,qubit_count,t_count,cx_count,t_depth,depth";
        if (reference_curve) std::cout << ",ref_qubit_count,ref_t_count,ref_cx_count,ref_t_depth";
        std::cout << "\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& row = rows[i];
            std::cout << row.routine << ',' << row.qubit_count << ',' << row.t_count << ',' << row.cx_count.to_string()
                      << ',' << row.t_depth << ',' << row.depth;
            if (reference_curve) {
                ReferenceRow ref = reference_row(which[i]);
                std::cout << ',' << ref.qubit_count << ',' << ref.t_count << ','
                          << HalfCount::from_halves(ref.cx_halves).to_string() << ',' << ref.t_depth;
            }
            std::cout << "\n";
        }
        return kOk;
    }
    auto cell = [](const std::string& ours, double o, double ref, bool have_ref) {
        std::ostringstream os;
        os << ours;
        if (have_ref) {
            std::ostringstream r;
            r << ref;
            os << " (" << r.str() << ", " << fmt_pct(percent_dev(o, ref)) << ")";
        }
        return os.str();
    };
    std::cout << std::left << std::setw(12) << "routine" << std::setw(20) << "qubits" << std::setw(26) << "T"
              << std::setw(30) << "CX" << std::setw(24) << "T-depth" << "depth\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        ReferenceRow ref = reference_row(which[i]);
        const double ref_cx = static_cast<double>(ref.cx_halves) / 2.0;
        std::cout << std::left << std::setw(12) << row.routine << std::setw(20)
                  << cell(std::to_string(row.qubit_count), static_cast<double>(row.qubit_count),
                          static_cast<double>(ref.qubit_count), reference_curve)
                  << std::setw(26)
                  << cell(std::to_string(row.t_count), static_cast<double>(row.t_count), static_cast<double>(ref.t_count),
                          reference_curve)
                  << std::setw(30) << cell(row.cx_count.to_string(), row.cx_count.value(), ref_cx, reference_curve)
                  << std::setw(24)
                  << cell(std::to_string(row.t_depth), static_cast<double>(row.t_depth), static_cast<double>(ref.t_depth),
                          reference_curve)
                  << row.depth << "\n";
    }
    if (reference_curve) std::cout << "values in parentheses: published figure, deviation\n";
    return kOk;
}

int cmd_shor(const CurveArgs& ca, std::size_t shots, std::optional<std::uint64_t> seed, const std::string& format) {
    BenchSetup s = ca.setup();
    ShorInstance inst = make_instance(s.curve, s.G, s.P, s.P0);
    ShorResult res = run_shor(inst, shots, seed.value_or(default_seed()), s.opt);
    const bool pass = res.ranking.best == inst.l_true && res.ranking.recovery_mass >= kRecoveryFloor;

    if (format == "json") {
        json outcomes = json::array();
        for (const auto& o : res.outcomes) {
            json j{{"y1", o.y1}, {"y2", o.y2}, {"probability", o.probability}};
            j["l_candidate"] = o.l_candidate ? json(*o.l_candidate) : json(nullptr);
            outcomes.push_back(j);
        }
        auto ranking = [](const CandidateRanking& rk) {
            json m = json::object();
            for (const auto& [c, p] : rk.mass) m[std::to_string(c)] = p;
            return json{{"candidate_mass", m},
                        {"best", rk.best ? json(*rk.best) : json(nullptr)},
                        {"recovery_mass", rk.recovery_mass}};
        };
        json hist = json::array();
        for (const auto& [y, cnt] : res.histogram) hist.push_back({{"y1", y.first}, {"y2", y.second}, {"count", cnt}});
        json out{{"instance",
                  {{"p", inst.curve.p}, {"a", inst.curve.a}, {"b", inst.curve.b}, {"G", point_json(inst.G)},
                   {"P", point_json(inst.P)}, {"P0", point_json(inst.P0)}, {"n", inst.n}, {"r", inst.r}}},
                 {"l_bruteforce", inst.l_true},
                 {"outcomes", outcomes},
                 {"postprocess", ranking(res.ranking)},
                 {"postprocess_rescaled", ranking(res.rescaled)},
                 {"exceptional_fraction", res.exceptional_fraction},
                 {"qubits", res.peak_qubits},
                 {"shots", shots},
                 {"histogram", hist},
                 {"recovery_floor", kRecoveryFloor},
                 {"pass", pass}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "instance: p=" << inst.curve.p << " G=" << inst.G << " P=" << inst.P << " P0=" << inst.P0
                  << " n=" << inst.n << " r=" << inst.r << "\n";
        std::cout << "branches through exceptional additions: " << res.exceptional_fraction << "\n";
        std::cout << "outcomes (y1,y2) with nonzero probability: " << res.outcomes.size() << "\n";
        auto show = [&](const char* name, const CandidateRanking& rk) {
            std::cout << name << ":";
            for (const auto& [c, p] : rk.mass) std::cout << " " << c << ":" << std::setprecision(4) << p;
            std::cout << "\n  best candidate "
                      << (rk.best ? std::to_string(*rk.best) : std::string("none")) << ", mass on l = "
                      << rk.recovery_mass << "\n";
        };
        show("candidate mass", res.ranking);
        show("candidate mass (rescaled y*r/2^n)", res.rescaled);
        std::cout << "brute-force l = " << inst.l_true << "\n";
        if (shots > 0) {
            std::cout << "histogram (" << shots << " shots):";
            for (const auto& [y, cnt] : res.histogram) std::cout << " " << y.first << "," << y.second << ":" << cnt;
            std::cout << "\n";
        }
        std::cout << (pass ? "PASS" : "FAIL") << ": recovered l "
                  << (res.ranking.best ? std::to_string(*res.ranking.best) : std::string("none")) << ", mass "
                  << res.ranking.recovery_mass << " (floor " << kRecoveryFloor << ")\n";
    }
    return pass ? kOk : kAcceptance;
}

int cmd_export(const CurveArgs& ca, const std::string& routine, const std::string& path, bool decompose) {
    auto r = parse_routine(routine);
    BenchSetup s = ca.setup();
    Circuit circ = build_routine(*r, s);
    if (decompose) circ = decompose_to_clifford_t(circ);
    std::ofstream f(path);
    if (!f) {
        std::cerr << "error: cannot open " << path << " for writing\n";
        return kIo;
    }
    f << export_gatelist(circ);
    f.close();
    if (!f) {
        std::cerr << "error: write to " << path << " failed\n";
        return kIo;
    }
    std::cout << "wrote " << circ.size() << " gates to " << path << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elliptic-curve discrete logarithm circuits: build, simulate, count"};
    app.require_subcommand(1);

    auto* inv = app.add_subcommand("invert", "modular inverse, classical or simulated circuit");
    std::int64_t inv_p = 7, inv_v = 0;
    bool inv_quantum = false, inv_json = false;
    std::optional<std::uint64_t> inv_seed;
    inv->add_option("--p", inv_p, "odd prime modulus")->capture_default_str();
    inv->add_option("--v", inv_v, "value to invert")->required();
    inv->add_flag("--quantum", inv_quantum, "simulate the reversible circuit");
    inv->add_option("--seed", inv_seed, "simulator seed (default: ECDLP_FORGE_SEED or 0)");
    inv->add_flag("--json", inv_json, "JSON output");

    auto* add = app.add_subcommand("ecadd", "simulate one in-place point addition");
    CurveArgs add_args;
    add_args.add(*add, false);
    std::string add_point, add_with;
    std::optional<int> add_ctrl;
    bool add_json = false;
    add->add_option("--point", add_point, "point in the quantum register \"x,y\"")->required();
    add->add_option("--add-point", add_with, "classical point to add \"x,y\"")->required();
    add->add_option("--ctrl", add_ctrl, "control qubit value")->check(CLI::IsMember({0, 1}));
    add->add_flag("--json", add_json, "JSON output");

    auto* bench = app.add_subcommand("bench", "Clifford+T resource table");
    CurveArgs bench_args;
    bench_args.add(*bench);
    std::string bench_routine_name, bench_format = "table";
    bench->add_option("--routine", bench_routine_name, "single routine")
        ->check(CLI::IsMember({"kaliski", "ecadd", "ctrl-ecadd", "shor"}));
    bench->add_option("--format", bench_format, "output format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();

    auto* shor = app.add_subcommand("shor", "run the full algorithm on a simulator");
    CurveArgs shor_args;
    shor_args.add(*shor);
    std::size_t shor_shots = 0;
    std::optional<std::uint64_t> shor_seed;
    std::string shor_format = "text";
    shor->add_option("--shots", shor_shots, "sampled shots in addition to the exact distribution")->capture_default_str();
    shor->add_option("--seed", shor_seed, "sampling seed (default: ECDLP_FORGE_SEED or 0)");
    shor->add_option("--format", shor_format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

    auto* exp = app.add_subcommand("export", "write a routine as a gate list");
    CurveArgs exp_args;
    exp_args.add(*exp);
    std::string exp_routine, exp_out;
    bool exp_raw = false;
    exp->add_option("--routine", exp_routine, "routine to export")
        ->required()
        ->check(CLI::IsMember({"kaliski", "ecadd", "ctrl-ecadd", "shor"}));
    exp->add_option("--out", exp_out, "output file")->required();
    exp->add_flag("--raw", exp_raw, "keep Toffoli-level gates instead of Clifford+T");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*inv) return cmd_invert(inv_p, inv_v, inv_quantum, inv_seed, inv_json);
        if (*add) return cmd_ecadd(add_args, add_point, add_with, add_ctrl, add_json);
        if (*bench) return cmd_bench(bench_args, bench_routine_name, bench_format);
        if (*shor) return cmd_shor(shor_args, shor_shots, shor_seed, shor_format);
        if (*exp) return cmd_export(exp_args, exp_routine, exp_out, !exp_raw);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        // A dirty ancilla or norm drift is a failed check, not bad input.
        const bool failed_check = e.kind() == ErrorKind::DeallocNonZero || e.kind() == ErrorKind::NormLoss;
        return failed_check ? kAcceptance : kUsage;
    }
    return kUsage;
}
