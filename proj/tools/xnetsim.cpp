// xnetsim: BER sweeps and algebraic checks for the (2x2, M) X-network scheme.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xnet/decoder.hpp"
#include "xnet/sim.hpp"
#include "xnet/verify.hpp"
#include "xnet/xnetwork.hpp"

namespace {

using json = nlohmann::json;
using namespace xnet;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFail = 3;
constexpr int kExitCap = 4;

// Named unitary P: quarter-turn, identity[:M], diag:phi1,phi2,... (phases in radians).
CMatrix named_p(const std::string& name, int m) {
    if (name == "quarter-turn") return quarter_turn_p3();
    if (name == "identity") return CMatrix::Identity(m, m);
    if (name.rfind("identity:", 0) == 0) {
        const int n = std::stoi(name.substr(9));
        return CMatrix::Identity(n, n);
    }
    if (name.rfind("diag:", 0) == 0) {
        std::vector<double> phases;
        std::istringstream in(name.substr(5));
        std::string item;
        while (std::getline(in, item, ',')) phases.push_back(std::stod(item));
        if (phases.empty()) throw ConfigError("--p diag: needs at least one phase");
        CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(phases.size()), static_cast<Eigen::Index>(phases.size()));
        for (std::size_t i = 0; i < phases.size(); ++i) p(i, i) = std::polar(1.0, phases[i]);
        return p;
    }
    throw UnknownName("P '" + name + "' (use quarter-turn, identity[:M] or diag:phi1,...)");
}

json complex_vector(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

json complex_matrix(const CMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(complex_vector(m.row(r).transpose()));
    return out;
}

void write_report(const std::string& path, const json& report) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report '" + path + "'");
    out << report.dump(2) << "\n";
}

int finish(bool pass, const std::string& line, json report, const std::string& report_path) {
    report["pass"] = pass;
    write_report(report_path, report);
    std::cout << (pass ? "PASS " : "FAIL ") << line << "\n";
    return pass ? kExitOk : kExitFail;
}

struct VerifyArgs {
    std::string check;
    std::string code = "lowdelay3";
    std::string constellation = "qpsk-rot";
    double theta = kDefaultTheta;
    std::string p = "quarter-turn";
    std::string report;
    int workers = 1;
    int trials = 8;
    int draws = 1000;
    std::uint64_t seed = 1;
    std::uint64_t cap = kDefaultCodebookCap;
};

int run_verify(const VerifyArgs& a) {
    json report{{"check", a.check}};
    Rng rng(a.seed);

    if (a.check == "cc") {
        const StbcCode code = make_code(a.code, a.theta);
        const CcReport r = check_cc(code);
        report.update({{"code", code.name}, {"theta", a.theta}, {"max_residual", r.max_residual}});
        std::ostringstream line;
        line << "cc code=" << code.name << " max_residual=" << r.max_residual;
        return finish(r.pass, line.str(), report, a.report);
    }
    if (a.check == "full-rank") {
        const StbcCode code = make_code(a.code, a.theta);
        const Constellation c = make_constellation(a.constellation);
        const FullRankReport r = check_full_rank_code(code, c, a.cap, a.workers);
        report.update({{"code", code.name},
                       {"constellation", c.label},
                       {"theta", a.theta},
                       {"phi", c.rotation_applied},
                       {"min_rank_found", r.min_rank_found},
                       {"tuples_checked", r.tuples_checked},
                       {"difference_alphabet", r.difference_alphabet},
                       {"witness", r.witness ? complex_vector(*r.witness) : json(nullptr)}});
        std::ostringstream line;
        line << "full-rank code=" << code.name << " constellation=" << c.label << " tuples=" << r.tuples_checked
             << " min_rank=" << r.min_rank_found;
        return finish(r.pass, line.str(), report, a.report);
    }
    if (a.check == "eig-multiplicity") {
        const CMatrix p = named_p(a.p, 3);
        const bool ok = eig_multiplicity_ok(p);
        report.update({{"p", a.p}, {"m", p.rows()}});
        return finish(ok, "eig-multiplicity p=" + a.p, report, a.report);
    }
    if (a.check == "commutator") {
        const CMatrix p = named_p(a.p, 3);
        const int r = commutator_max_rank(p, a.trials, rng);
        report.update({{"p", a.p}, {"m", p.rows()}, {"max_rank", r}, {"trials", a.trials}});
        return finish(r == p.rows(), "commutator p=" + a.p + " max_rank=" + std::to_string(r), report, a.report);
    }
    if (a.check == "witness") {
        const CMatrix p = named_p(a.p, 3);
        try {
            const CMatrix w = construct_commutator_witness(p, rng);
            const int r = numeric_rank(CMatrix(w * p - p * w));
            report.update({{"p", a.p}, {"a", complex_matrix(w)}, {"commutator_rank", r}});
            return finish(r == p.rows(), "witness p=" + a.p + " rank=" + std::to_string(r), report, a.report);
        } catch (const Infeasible& e) {
            report.update({{"p", a.p}, {"reason", e.what()}});
            return finish(false, "witness p=" + a.p + " infeasible", report, a.report);
        }
    }
    if (a.check == "witness-det") {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double theta = 2.0 * std::numbers::pi * i / 100.0;
            worst = std::max(worst, std::abs(witness_channel_determinant(theta) -
                                             witness_channel_determinant_closed_form(theta)));
        }
        report["max_abs_error"] = worst;
        std::ostringstream line;
        line << "witness-det max_abs_error=" << worst;
        return finish(worst <= 1e-9, line.str(), report, a.report);
    }
    if (a.check == "heq-rank") {
        const StbcCode code = make_code(a.code, a.theta);
        const HeqRankReport r = heq_rank_stats(code, a.draws, rng);
        report.update({{"code", code.name},
                       {"draws", r.draws},
                       {"full_rank_fraction", r.full_rank_fraction},
                       {"min_rank", r.min_rank},
                       {"full_rank", r.full_rank}});
        std::ostringstream line;
        line << "heq-rank code=" << code.name << " full_rank_fraction=" << r.full_rank_fraction;
        return finish(r.full_rank_fraction == 1.0, line.str(), report, a.report);
    }
    throw ConfigError("unknown check '" + a.check +
                      "' (cc, full-rank, eig-multiplicity, commutator, witness, witness-det, heq-rank)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"xnetsim: (2x2, M) X-network BER sweeps and code checks"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int workers_override = 0;
    auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo BER sweep");
    simulate->add_option("--config", config_path, "sweep config file")->required();
    simulate->add_option("--out", out_path, "CSV output path")->required();
    simulate->add_option("--workers", workers_override, "override the worker count");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run one algebraic check");
    verify->add_option("check", va.check,
                       "cc | full-rank | eig-multiplicity | commutator | witness | witness-det | heq-rank")
        ->required();
    verify->add_option("--code", va.code, "code name");
    verify->add_option("--constellation", va.constellation, "constellation name");
    verify->add_option("--theta", va.theta, "code angle in radians");
    verify->add_option("--p", va.p, "quarter-turn | identity[:M] | diag:phi1,phi2,...");
    verify->add_option("--report", va.report, "JSON report path");
    verify->add_option("--workers", va.workers, "threads for full-rank enumeration");
    verify->add_option("--trials", va.trials, "random A draws for the commutator check");
    verify->add_option("--draws", va.draws, "channel draws for heq-rank");
    verify->add_option("--seed", va.seed, "RNG seed");
    verify->add_option("--cap", va.cap, "enumeration cap");

    std::string rs_code = "lowdelay3", rs_report;
    double rs_theta = kDefaultTheta;
    int rs_draws = 1000;
    std::uint64_t rs_seed = 1;
    auto* rankstats = app.add_subcommand("rankstats", "full-rank fraction of the effective systems");
    rankstats->add_option("--code", rs_code, "code name");
    rankstats->add_option("--theta", rs_theta, "code angle in radians");
    rankstats->add_option("--draws", rs_draws, "channel draws");
    rankstats->add_option("--seed", rs_seed, "RNG seed");
    rankstats->add_option("--report", rs_report, "JSON report path");

    std::string slope_in;
    std::size_t slope_window = 3;
    auto* slope = app.add_subcommand("slope", "diversity slope of a sweep CSV");
    slope->add_option("--in", slope_in, "sweep CSV")->required();
    slope->add_option("--window", slope_window, "number of highest-SNR points to fit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*simulate) {
            SimConfig cfg;
            try {
                cfg = load_sim_config(config_path);
            } catch (const IoError& e) {
                throw ConfigError(e.what());
            }
            if (workers_override > 0) cfg.workers = workers_override;
            const SweepResult result = run_sweep(cfg);
            write_csv(result, out_path);
            for (const BerPoint& p : result.points)
                std::cout << "snr_db=" << p.snr_db << " trials=" << p.trials << " ber=" << p.ber()
                          << " cwer=" << p.cwer() << "\n";
            return kExitOk;
        }
        if (*verify) return run_verify(va);
        if (*rankstats) {
            Rng rng(rs_seed);
            const StbcCode code = make_code(rs_code, rs_theta);
            const HeqRankReport r = heq_rank_stats(code, rs_draws, rng);
            std::cout << "code=" << code.name << " draws=" << r.draws << " full_rank_fraction=" << r.full_rank_fraction
                      << " min_rank=" << r.min_rank << "/" << r.full_rank << "\n";
            write_report(rs_report, json{{"code", code.name},
                                         {"draws", r.draws},
                                         {"full_rank_fraction", r.full_rank_fraction},
                                         {"min_rank", r.min_rank},
                                         {"full_rank", r.full_rank}});
            return kExitOk;
        }
        if (*slope) {
            const SweepResult result = read_csv(slope_in);
            std::cout << "slope=" << estimate_diversity_slope(result.points, slope_window) << "\n";
            return kExitOk;
        }
    } catch (const CodebookTooLarge& e) {
        std::cerr << e.what() << "\n";
        return kExitCap;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const UnknownName& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const UnsupportedSize& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
