#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xnet/ber.hpp"
#include "xnet/config.hpp"
#include "xnet/stbc.hpp"

namespace xnet {

enum class DecoderKind { Sphere, Exhaustive };

struct SimConfig {
    std::string scheme = "alamouti";
    int m = 2;
    std::string constellation = "bpsk";
    double theta = kDefaultTheta;
    std::vector<double> snr_db_list;
    std::uint64_t min_codeword_errors = 200;
    std::uint64_t max_trials_per_point = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 1;
    bool noise_off = false;
    DecoderKind decoder = DecoderKind::Sphere;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Builds a SimConfig from a parsed table. Keys may sit at top level or under
/// a [simulation] section; unknown keys and ill-typed values raise ConfigError.
SimConfig sim_config_from_table(const ConfigTable& table);
SimConfig load_sim_config(const std::string& path);

struct SweepResult {
    SimConfig config;
    std::vector<BerPoint> points;
    double phi = 0.0;            // constellation rotation
    std::string labeling;        // bit labelling of the constellation
    std::string version;         // library version that produced the data
    std::uint64_t redraws = 0;   // channel redraws after rank-deficient systems

    bool operator==(const SweepResult& other) const;
};

/// Trials per batch; the stopping rule is only evaluated between batches so
/// the result does not depend on the worker count.
constexpr std::uint64_t kTrialBatch = 64;

SweepResult run_sweep(const SimConfig& cfg);

/// Outcome of one Monte Carlo trial at one SNR point.
struct TrialOutcome {
    std::uint64_t bits_sent = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t codeword_errors = 0;
    std::uint64_t redraws = 0;
};

/// One trial (channel, four symbol vectors, both receivers) driven entirely by `seed`.
TrialOutcome run_trial(const StbcCode& code, const Constellation& c, double snr_db, std::uint64_t seed,
                       bool noise_off, DecoderKind decoder);

constexpr const char* kCsvColumns = "snr_db,trials,bits_sent,bit_errors,codeword_errors,ber,cwer";

std::string format_csv(const SweepResult& result);
SweepResult parse_csv(const std::string& text);
void write_csv(const SweepResult& result, const std::string& path);
SweepResult read_csv(const std::string& path);

std::string library_version();

} // namespace xnet
