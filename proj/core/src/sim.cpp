#include "xnet/sim.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <exception>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "xnet/decoder.hpp"
#include "xnet/xnetwork.hpp"

#ifndef XNET_VERSION
#define XNET_VERSION "unknown"
#endif

namespace xnet {

namespace {

constexpr int kMaxRedrawsPerTrial = 100;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
    return out + "]";
}

const char* to_string(DecoderKind d) { return d == DecoderKind::Sphere ? "sphere" : "exhaustive"; }

DecoderKind decoder_from_string(const std::string& s) {
    if (s == "sphere") return DecoderKind::Sphere;
    if (s == "exhaustive") return DecoderKind::Exhaustive;
    throw ConfigError("decoder: expected 'sphere' or 'exhaustive', got '" + s + "'");
}

std::vector<int> random_indices(Rng& rng, int k, std::size_t q) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(q) - 1);
    std::vector<int> out(static_cast<std::size_t>(k));
    for (auto& i : out) i = pick(rng);
    return out;
}

CVector symbols(const Constellation& c, const std::vector<int>& idx) {
    CVector x(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) x(static_cast<Eigen::Index>(i)) = c.points[idx[i]];
    return x;
}

} // namespace

std::string library_version() { return XNET_VERSION; }

void SimConfig::validate() const {
    if (snr_db_list.empty()) throw ConfigError("snr_db: list must not be empty");
    for (std::size_t i = 1; i < snr_db_list.size(); ++i)
        if (!(snr_db_list[i] > snr_db_list[i - 1])) throw ConfigError("snr_db: values must be strictly ascending");
    if (min_codeword_errors < 1) throw ConfigError("min_codeword_errors: must be at least 1");
    if (max_trials_per_point < 1) throw ConfigError("max_trials_per_point: must be at least 1");
    if (workers < 1) throw ConfigError("workers: must be at least 1");
    if (m < 1) throw ConfigError("m: must be positive");
}

SimConfig sim_config_from_table(const ConfigTable& table) {
    SimConfig cfg;
    for (const auto& [full_key, value] : table) {
        std::string key = full_key;
        if (key.rfind("simulation.", 0) == 0) key = key.substr(11);
        const std::string where = " (line " + std::to_string(value.line) + ")";

        auto as_number = [&]() {
            if (const auto* d = std::get_if<double>(&value.data)) return *d;
            throw ConfigError(key + ": expected a number" + where);
        };
        auto as_count = [&](double lo) {
            const double d = as_number();
            if (d < lo || d != static_cast<double>(static_cast<std::uint64_t>(d)))
                throw ConfigError(key + ": expected an integer >= " + fmt(lo) + where);
            return static_cast<std::uint64_t>(d);
        };
        auto as_string = [&]() {
            if (const auto* s = std::get_if<std::string>(&value.data)) return *s;
            throw ConfigError(key + ": expected a string" + where);
        };

        if (key == "scheme") {
            cfg.scheme = as_string();
        } else if (key == "m") {
            cfg.m = static_cast<int>(as_count(1));
        } else if (key == "constellation") {
            cfg.constellation = as_string();
        } else if (key == "theta") {
            cfg.theta = as_number();
        } else if (key == "snr_db" || key == "snr_db_list") {
            if (const auto* list = std::get_if<std::vector<double>>(&value.data))
                cfg.snr_db_list = *list;
            else
                cfg.snr_db_list = {as_number()};
        } else if (key == "min_codeword_errors") {
            cfg.min_codeword_errors = as_count(1);
        } else if (key == "max_trials_per_point") {
            cfg.max_trials_per_point = as_count(1);
        } else if (key == "seed") {
            // parsed from the raw text (full 64-bit range)
            const std::string& t = value.text;
            char* end = nullptr;
            errno = 0;
            const unsigned long long s = std::strtoull(t.c_str(), &end, 0);
            if (t.empty() || t.front() == '-' || errno != 0 || end != t.c_str() + t.size())
                throw ConfigError("seed: expected a non-negative 64-bit integer" + where);
            cfg.seed = s;
        } else if (key == "workers") {
            cfg.workers = static_cast<int>(as_count(1));
        } else if (key == "noise_off") {
            if (const auto* b = std::get_if<bool>(&value.data))
                cfg.noise_off = *b;
            else
                throw ConfigError("noise_off: expected true or false" + where);
        } else if (key == "decoder") {
            cfg.decoder = decoder_from_string(as_string());
        } else {
            throw ConfigError("unknown key '" + full_key + "'" + where);
        }
    }
    cfg.validate();
    return cfg;
}

SimConfig load_sim_config(const std::string& path) {
    try {
        return sim_config_from_table(load_config_file(path));
    } catch (const ParseError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

bool SweepResult::operator==(const SweepResult& o) const {
    const SimConfig& a = config;
    const SimConfig& b = o.config;
    return a.scheme == b.scheme && a.m == b.m && a.constellation == b.constellation && a.theta == b.theta &&
           a.snr_db_list == b.snr_db_list && a.min_codeword_errors == b.min_codeword_errors &&
           a.max_trials_per_point == b.max_trials_per_point && a.seed == b.seed && a.noise_off == b.noise_off &&
           a.decoder == b.decoder && points == o.points && phi == o.phi && labeling == o.labeling &&
           version == o.version && redraws == o.redraws;
}

TrialOutcome run_trial(const StbcCode& code, const Constellation& c, double snr_db, std::uint64_t seed,
                       bool noise_off, DecoderKind decoder) {
    Rng rng(seed);
    const Snr snr = Snr::from_db(snr_db);
    TrialOutcome out;
    for (int attempt = 0; attempt < kMaxRedrawsPerTrial; ++attempt) {
        const ChannelRealization ch = draw_channel(rng, code.m);
        const PrecoderSet pre = lij_precoders(ch);
        const auto i11 = random_indices(rng, code.k, c.size());
        const auto i12 = random_indices(rng, code.k, c.size());
        const auto i21 = random_indices(rng, code.k, c.size());
        const auto i22 = random_indices(rng, code.k, c.size());
        const TransmitSignals tx = assemble_transmit(code, symbols(c, i11), symbols(c, i12), symbols(c, i21),
                                                     symbols(c, i22), pre, snr);
        const ReceivedSignals rx = receive(ch, tx, rng, !noise_off);

        try {
            TrialOutcome trial;
            for (const Receiver r : {Receiver::Rx1, Receiver::Rx2}) {
                const CMatrix& y = r == Receiver::Rx1 ? rx.y1 : rx.y2;
                const auto [ha, hb] = desired_channels(ch, pre, r);
                const RealEffectiveSystem sys =
                    build_effective_real_system(code, ha, hb, cancel_interference(y, *code.cc, r), snr, r);
                const DecodeResult d = decoder == DecoderKind::Sphere ? sphere_decode(sys, c) : ml_exhaustive(sys, c);
                const ErrorCount e = r == Receiver::Rx1 ? count_errors(i11, i21, d, c) : count_errors(i12, i22, d, c);
                trial.bit_errors += e.bit_errors;
                trial.codeword_errors += e.codeword_error ? 1 : 0;
            }
            trial.bits_sent = 4ULL * static_cast<std::uint64_t>(code.k) * static_cast<std::uint64_t>(c.bits_per_symbol);
            trial.redraws = out.redraws;
            return trial;
        } catch (const RankDeficient&) {
            ++out.redraws;
        }
    }
    throw RngPathology("rank-deficient effective systems on " + std::to_string(kMaxRedrawsPerTrial) +
                       " consecutive draws");
}

SweepResult run_sweep(const SimConfig& cfg) {
    cfg.validate();
    const StbcCode code = make_code(cfg.scheme, cfg.theta);
    if (code.m != cfg.m)
        throw ConfigError("m: scheme '" + cfg.scheme + "' uses " + std::to_string(code.m) + " antennas, config says " +
                          std::to_string(cfg.m));
    if (!code.cc) throw ConfigError("scheme: '" + cfg.scheme + "' has no column-cancellation spec");
    const Constellation c = make_constellation(cfg.constellation);

    SweepResult result;
    result.config = cfg;
    result.phi = c.rotation_applied;
    result.labeling = to_string(c.labeling);
    result.version = library_version();

    std::vector<TrialOutcome> batch(kTrialBatch);
    for (std::size_t si = 0; si < cfg.snr_db_list.size(); ++si) {
        BerPoint pt;
        pt.snr_db = cfg.snr_db_list[si];
        while (pt.trials < cfg.max_trials_per_point && pt.codeword_errors < cfg.min_codeword_errors) {
            const std::uint64_t first = pt.trials;
            const std::uint64_t count = std::min(kTrialBatch, cfg.max_trials_per_point - pt.trials);
            auto work = [&](std::uint64_t lane, std::uint64_t stride) {
                for (std::uint64_t i = lane; i < count; i += stride)
                    batch[i] = run_trial(code, c, pt.snr_db, derive_seed(cfg.seed, si, first + i), cfg.noise_off,
                                         cfg.decoder);
            };
            const auto lanes = static_cast<std::uint64_t>(std::min<std::uint64_t>(cfg.workers, count));
            if (lanes <= 1) {
                work(0, 1);
            } else {
                std::vector<std::thread> threads;
                std::vector<std::exception_ptr> errors(lanes);
                for (std::uint64_t l = 0; l < lanes; ++l)
                    threads.emplace_back([&, l] {
                        try {
                            work(l, lanes);
                        } catch (...) {
                            errors[l] = std::current_exception();
                        }
                    });
                for (auto& t : threads) t.join();
                for (auto& e : errors)
                    if (e) std::rethrow_exception(e);
            }
            for (std::uint64_t i = 0; i < count; ++i) {
                pt.bits_sent += batch[i].bits_sent;
                pt.bit_errors += batch[i].bit_errors;
                pt.codeword_errors += batch[i].codeword_errors;
                result.redraws += batch[i].redraws;
            }
            pt.trials += count;
        }
        result.points.push_back(pt);
    }
    return result;
}

std::string format_csv(const SweepResult& r) {
    std::ostringstream out;
    const SimConfig& c = r.config;
    out << "# xnet ber sweep\n"
        << "# version = " << r.version << "\n"
        << "# scheme = " << c.scheme << "\n"
        << "# m = " << c.m << "\n"
        << "# constellation = " << c.constellation << "\n"
        << "# labeling = " << r.labeling << "\n"
        << "# theta = " << fmt(c.theta) << "\n"
        << "# phi = " << fmt(r.phi) << "\n"
        << "# seed = " << c.seed << "\n"
        << "# min_codeword_errors = " << c.min_codeword_errors << "\n"
        << "# max_trials_per_point = " << c.max_trials_per_point << "\n"
        << "# noise_off = " << (c.noise_off ? "true" : "false") << "\n"
        << "# decoder = " << to_string(c.decoder) << "\n"
        << "# snr_db = " << fmt_list(c.snr_db_list) << "\n"
        << "# redraws = " << r.redraws << "\n"
        << kCsvColumns << "\n";
    for (const BerPoint& p : r.points)
        out << fmt(p.snr_db) << ',' << p.trials << ',' << p.bits_sent << ',' << p.bit_errors << ','
            << p.codeword_errors << ',' << fmt(p.ber()) << ',' << fmt(p.cwer()) << "\n";
    return out.str();
}

SweepResult parse_csv(const std::string& text) {
    SweepResult r;
    r.config.snr_db_list.clear();
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_columns = false;

    auto parse_u64 = [&](const std::string& s, const std::string& field) {
        if (!s.empty() && s.front() == '-') throw ParseError("negative " + field + " '" + s + "'", line_no);
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (s.empty() || errno != 0 || end != s.c_str() + s.size())
            throw ParseError("bad " + field + " '" + s + "'", line_no);
        return static_cast<std::uint64_t>(v);
    };
    auto parse_double = [&](const std::string& s, const std::string& field) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) throw ParseError("bad " + field + " '" + s + "'", line_no);
        return v;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            const std::string key = trim(line.substr(1, eq - 1));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "version") r.version = value;
            else if (key == "scheme") r.config.scheme = value;
            else if (key == "m") r.config.m = static_cast<int>(parse_u64(value, key));
            else if (key == "constellation") r.config.constellation = value;
            else if (key == "labeling") r.labeling = value;
            else if (key == "theta") r.config.theta = parse_double(value, key);
            else if (key == "phi") r.phi = parse_double(value, key);
            else if (key == "seed") r.config.seed = parse_u64(value, key);
            else if (key == "min_codeword_errors") r.config.min_codeword_errors = parse_u64(value, key);
            else if (key == "max_trials_per_point") r.config.max_trials_per_point = parse_u64(value, key);
            else if (key == "noise_off") r.config.noise_off = value == "true";
            else if (key == "decoder") {
                try {
                    r.config.decoder = decoder_from_string(value);
                } catch (const ConfigError& e) {
                    throw ParseError(e.what(), line_no);
                }
            } else if (key == "redraws") r.redraws = parse_u64(value, key);
            else if (key == "snr_db") {
                if (value.size() < 2 || value.front() != '[' || value.back() != ']')
                    throw ParseError("snr_db must be a bracketed list", line_no);
                std::istringstream list(value.substr(1, value.size() - 2));
                std::string item;
                while (std::getline(list, item, ',')) r.config.snr_db_list.push_back(parse_double(trim(item), key));
            }
            continue;
        }
        if (!have_columns) {
            if (line != kCsvColumns) throw ParseError("expected column header '" + std::string(kCsvColumns) + "'", line_no);
            have_columns = true;
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string f;
        while (std::getline(row, f, ',')) fields.push_back(f);
        if (fields.size() != 7) throw ParseError("expected 7 fields, got " + std::to_string(fields.size()), line_no);
        BerPoint p;
        p.snr_db = parse_double(fields[0], "snr_db");
        p.trials = parse_u64(fields[1], "trials");
        p.bits_sent = parse_u64(fields[2], "bits_sent");
        p.bit_errors = parse_u64(fields[3], "bit_errors");
        p.codeword_errors = parse_u64(fields[4], "codeword_errors");
        const double ber = parse_double(fields[5], "ber");
        const double cwer = parse_double(fields[6], "cwer");
        if (p.bit_errors > p.bits_sent) throw ParseError("bit_errors exceeds bits_sent", line_no);
        if (p.codeword_errors > kCodewordPairsPerTrial * p.trials)
            throw ParseError("codeword_errors exceeds the number of decoded codeword pairs", line_no);
        if (ber < 0.0) throw ParseError("negative ber", line_no);
        if (cwer < 0.0) throw ParseError("negative cwer", line_no);
        r.points.push_back(p);
    }
    if (!have_columns) throw ParseError("missing column header", line_no);
    return r;
}

void write_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << format_csv(result);
    if (!out) throw IoError("write to '" + path + "' failed");
}

SweepResult read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

} // namespace xnet
