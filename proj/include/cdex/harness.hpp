#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdex/learning.hpp"
#include "cdex/model.hpp"
#include "cdex/pmp.hpp"
#include "cdex/rng.hpp"

namespace cdex {

// Everything one Monte-Carlo run needs. `channelAnalysis` drives the virtual
// stage decisions (deterministic or expected); transmissions themselves are
// always sampled. `pMean`/`qMean` are the per-iteration means of the
// player-player and base-station erasure draws.
struct ExperimentConfig {
    int players = 20;
    int packets = 30;
    double pMean = 0.1;   // player-player erasure mean
    double qMean = 0.2;   // base-station erasure mean
    double spread = 0.1;  // half-width of the uniform draw around each mean
    int punishmentV = 2;
    GameMode game = GameMode::game2;
    ChannelMode channelAnalysis = ChannelMode::expected;
    bool liveness = true;
    bool singleSweep = false;
    int iterations = 500;
    std::uint64_t masterSeed = 1;
    int slotCap = -1; // default 100 * packets
};

void validate_config(const ExperimentConfig& cfg);

// Independent random streams of one iteration, all derived from
// (masterSeed, iteration index, stream tag).
enum class StreamTag : std::uint64_t {
    init = 0x696e6974, // broadcast phase
    cde = 0x636465,    // cooperative recovery channel draws
    pmp = 0x706d70,    // baseline reception draws
};
std::uint64_t stream_seed(const ExperimentConfig& cfg, std::uint64_t index, StreamTag tag);

// Fresh erasure model for one iteration: q entries first, then off-diagonal p
// entries, all uniform on the mean +/- spread interval clipped to
// [0.001, 0.99], diagonal p fixed at zero. Seeded by (masterSeed, index) only.
ErasureModel sample_erasure_model(const ExperimentConfig& cfg, std::uint64_t index);

struct EpisodeResult {
    int stages = 0;
    double meanEstimate = 0.0;
    std::int64_t totalDelay = 0;
    bool censored = false;
};

// Recovery phase only, from a given initial state: per stage the players run
// the best-response rule, then the chosen profile is executed on a sampled
// channel, until completion or the slot cap (censored).
EpisodeResult run_cde_recovery(const SideInformationState& start, const ErasureModel& model,
                               const ExperimentConfig& cfg, Rng& rng);

// Full episode for iteration `index`: sample a model, run the broadcast init
// phase, then the recovery phase. Seeding is derived from
// (masterSeed, index, stream-tag), so episodes are independent of ordering.
EpisodeResult run_cde_episode(const ExperimentConfig& cfg, std::uint64_t index);

// Matching baseline episode for the same iteration (same model and same
// initial state as the cooperative episode with this index).
PmpEpisodeResult run_pmp_episode_indexed(const ExperimentConfig& cfg, std::uint64_t index);

enum class SweepVariable { players, erasureRatio };

struct SweepRow {
    double x = 0.0;
    std::string scheme;       // "cde" or "pmp"
    double meanT = 0.0;       // over uncensored iterations
    double stderrT = 0.0;     // standard error of meanT
    double meanEstimate = 0.0;
    int censored = 0;         // iterations excluded from the means
    int iterations = 0;       // iterations included in the means
};
using SweepTable = std::vector<SweepRow>;

// Paired Monte-Carlo sweep: per grid point and iteration, the cooperative and
// baseline episodes share the sampled model and the init-phase outcome.
// `players` grid values replace cfg.players; `erasureRatio` values set
// cfg.pMean = ratio * cfg.qMean.
SweepTable run_sweep(const ExperimentConfig& cfg, SweepVariable variable,
                     const std::vector<double>& grid);

// CSV (header `x,scheme,mean_T,stderr,mean_estimate,censored,iterations`) and
// a gnuplot-friendly .dat sibling next to it. Byte-deterministic.
std::string sweep_csv(const SweepTable& table);
std::string sweep_dat(const SweepTable& table);
void emit_outputs(const SweepTable& table, const std::string& csvPath);

// Plain-text stage-state snapshot:
//   line 1: M N
//   M lines: N wants bits per player
//   M lines: M player-player erasure probabilities
//   1 line:  M base-station erasures
//   1 line:  M cumulative delays
//   1 line:  M frozen initial wants counts
struct Snapshot {
    SideInformationState state;
    ErasureModel model;
    std::vector<std::int64_t> delays;
    std::vector<int> initialWants;
};

Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot_file(const std::string& path);
void write_snapshot(const Snapshot& snap, std::ostream& out);
void write_snapshot_file(const Snapshot& snap, const std::string& path);

// Builds a recovery-phase session from a snapshot (fresh collision window).
Session snapshot_session(const Snapshot& snap, GameMode mode, int punishmentV);

// %.9g rendering used by every emitted table, so files are byte-stable.
std::string format_double(double v);

} // namespace cdex
