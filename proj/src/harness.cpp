#include "cdex/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cdex/delay.hpp"
#include "cdex/game.hpp"

namespace cdex {

std::uint64_t stream_seed(const ExperimentConfig& cfg, std::uint64_t index, StreamTag tag) {
    return hash_seed({cfg.masterSeed, index, static_cast<std::uint64_t>(tag)});
}

namespace {

struct ClippedInterval {
    double lo, hi;
};

ClippedInterval clipped_interval(double mean, double spread, const char* what) {
    ClippedInterval iv{std::max(0.001, mean - spread), std::min(0.99, mean + spread)};
    if (!(iv.lo <= iv.hi))
        throw std::invalid_argument(std::string("sample_erasure_model: clipped draw interval for ") +
                                    what + " is empty; move the mean into (0, 1)");
    return iv;
}

int effective_slot_cap(const ExperimentConfig& cfg) {
    return cfg.slotCap < 0 ? 100 * cfg.packets : cfg.slotCap;
}

} // namespace

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.players < 1 || cfg.players > 64)
        throw std::invalid_argument("config: players must be in [1, 64]");
    if (cfg.packets < 0) throw std::invalid_argument("config: packets must be non-negative");
    if (cfg.iterations < 1) throw std::invalid_argument("config: iterations must be >= 1");
    if (cfg.spread < 0.0) throw std::invalid_argument("config: spread must be non-negative");
    if (cfg.punishmentV < 0) throw std::invalid_argument("config: punishment window must be non-negative");
    if (cfg.channelAnalysis == ChannelMode::realized)
        throw std::invalid_argument(
            "config: channel mode 'realized' cannot drive virtual stage decisions; "
            "use 'deterministic' or 'expected'");
    clipped_interval(cfg.pMean, cfg.spread, "p");
    clipped_interval(cfg.qMean, cfg.spread, "q");
}

ErasureModel sample_erasure_model(const ExperimentConfig& cfg, std::uint64_t index) {
    ClippedInterval pIv = clipped_interval(cfg.pMean, cfg.spread, "p");
    ClippedInterval qIv = clipped_interval(cfg.qMean, cfg.spread, "q");
    Rng rng(hash_seed({cfg.masterSeed, index}));
    const int M = cfg.players;
    ErasureModel model(M);
    // q before p: the baseline scheme consumes only q, so both schemes see the
    // same base-station draw for a given iteration regardless of what follows.
    for (int i = 0; i < M; ++i) model.q[static_cast<std::size_t>(i)] = rng.uniform(qIv.lo, qIv.hi);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            if (i != j) model.set(i, j, rng.uniform(pIv.lo, pIv.hi));
    return model;
}

EpisodeResult run_cde_recovery(const SideInformationState& start, const ErasureModel& model,
                               const ExperimentConfig& cfg, Rng& rng) {
    Session sess = make_session(start, model, cfg.game, cfg.punishmentV);
    ResolveOptions ropts;
    ropts.channel = cfg.channelAnalysis;
    ropts.liveness = cfg.liveness;
    ropts.singleSweep = cfg.singleSweep;

    EpisodeResult res;
    const int cap = effective_slot_cap(cfg);
    while (!is_complete(sess.state)) {
        if (res.stages >= cap) {
            res.censored = true;
            break;
        }
        std::uint64_t profile = resolve_stage_action(sess, ropts);
        advance_stage(sess, profile, rng);
        res.stages += 1;
    }

    std::vector<double> delays(static_cast<std::size_t>(sess.players()));
    for (int i = 0; i < sess.players(); ++i) {
        delays[static_cast<std::size_t>(i)] =
            static_cast<double>(sess.ledger.cumulativeDelay[static_cast<std::size_t>(i)]);
        res.totalDelay += sess.ledger.cumulativeDelay[static_cast<std::size_t>(i)];
    }
    CompletionEstimate est =
        completion_estimate(sess.ledger.initialWants, delays, sess.model.average_erasure());
    double sum = 0.0;
    for (double c : est.perPlayer) sum += c;
    res.meanEstimate = sum / static_cast<double>(sess.players());
    return res;
}

EpisodeResult run_cde_episode(const ExperimentConfig& cfg, std::uint64_t index) {
    ErasureModel model = sample_erasure_model(cfg, index);
    Rng rngInit(stream_seed(cfg, index, StreamTag::init));
    SideInformationState s0 = run_init_phase(cfg.players, cfg.packets, model.q, rngInit);
    Rng rngCde(stream_seed(cfg, index, StreamTag::cde));
    return run_cde_recovery(s0, model, cfg, rngCde);
}

PmpEpisodeResult run_pmp_episode_indexed(const ExperimentConfig& cfg, std::uint64_t index) {
    ErasureModel model = sample_erasure_model(cfg, index);
    Rng rngInit(stream_seed(cfg, index, StreamTag::init));
    SideInformationState s0 = run_init_phase(cfg.players, cfg.packets, model.q, rngInit);
    Rng rngPmp(stream_seed(cfg, index, StreamTag::pmp));
    return run_pmp_episode(s0, model.q, rngPmp, effective_slot_cap(cfg));
}

namespace {

struct Accumulator {
    double sumT = 0.0, sumT2 = 0.0, sumEst = 0.0;
    int included = 0, censored = 0;

    void add(int stages, double estimate, bool wasCensored) {
        if (wasCensored) {
            censored += 1;
            return;
        }
        double t = static_cast<double>(stages);
        sumT += t;
        sumT2 += t * t;
        sumEst += estimate;
        included += 1;
    }

    SweepRow row(double x, const char* scheme) const {
        SweepRow r;
        r.x = x;
        r.scheme = scheme;
        r.censored = censored;
        r.iterations = included;
        if (included > 0) {
            r.meanT = sumT / included;
            r.meanEstimate = sumEst / included;
            if (included > 1) {
                double var = (sumT2 - sumT * sumT / included) / (included - 1);
                if (var < 0.0) var = 0.0;
                r.stderrT = std::sqrt(var / included);
            }
        }
        return r;
    }
};

} // namespace

SweepTable run_sweep(const ExperimentConfig& cfg, SweepVariable variable,
                     const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("run_sweep: grid must be non-empty");
    SweepTable table;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        ExperimentConfig point = cfg;
        if (variable == SweepVariable::players) {
            point.players = static_cast<int>(std::llround(grid[gi]));
        } else {
            point.pMean = grid[gi] * cfg.qMean;
        }
        validate_config(point);

        Accumulator cde, pmp;
        for (int it = 0; it < point.iterations; ++it) {
            std::uint64_t index =
                gi * static_cast<std::uint64_t>(point.iterations) + static_cast<std::uint64_t>(it);
            EpisodeResult c = run_cde_episode(point, index);
            cde.add(c.stages, c.meanEstimate, c.censored);
            PmpEpisodeResult p = run_pmp_episode_indexed(point, index);
            pmp.add(p.stages, p.meanEstimate, p.censored);
        }
        table.push_back(cde.row(grid[gi], "cde"));
        table.push_back(pmp.row(grid[gi], "pmp"));
    }
    return table;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
}

std::string sweep_csv(const SweepTable& table) {
    std::string out = "x,scheme,mean_T,stderr,mean_estimate,censored,iterations\n";
    for (const SweepRow& r : table) {
        out += format_double(r.x);
        out += ',';
        out += r.scheme;
        out += ',';
        out += format_double(r.meanT);
        out += ',';
        out += format_double(r.stderrT);
        out += ',';
        out += format_double(r.meanEstimate);
        out += ',';
        out += std::to_string(r.censored);
        out += ',';
        out += std::to_string(r.iterations);
        out += '\n';
    }
    return out;
}

std::string sweep_dat(const SweepTable& table) {
    std::string out;
    const char* schemes[2] = {"cde", "pmp"};
    for (int s = 0; s < 2; ++s) {
        if (s > 0) out += "\n\n"; // gnuplot index separator
        out += "# scheme: ";
        out += schemes[s];
        out += "\n# x mean_T stderr mean_estimate censored iterations\n";
        for (const SweepRow& r : table) {
            if (r.scheme != schemes[s]) continue;
            out += format_double(r.x);
            out += ' ';
            out += format_double(r.meanT);
            out += ' ';
            out += format_double(r.stderrT);
            out += ' ';
            out += format_double(r.meanEstimate);
            out += ' ';
            out += std::to_string(r.censored);
            out += ' ';
            out += std::to_string(r.iterations);
            out += '\n';
        }
    }
    return out;
}

namespace {

std::string dat_path_for(const std::string& csvPath) {
    std::size_t dot = csvPath.find_last_of('.');
    std::size_t slash = csvPath.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return csvPath.substr(0, dot) + ".dat";
    return csvPath + ".dat";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

} // namespace

void emit_outputs(const SweepTable& table, const std::string& csvPath) {
    write_text_file(csvPath, sweep_csv(table));
    write_text_file(dat_path_for(csvPath), sweep_dat(table));
}

Snapshot read_snapshot(std::istream& in) {
    Snapshot snap;
    int M = 0, N = 0;
    if (!(in >> M >> N)) throw std::runtime_error("snapshot: cannot read M N header");
    if (M < 1 || M > 64 || N < 0) throw std::runtime_error("snapshot: invalid dimensions");

    snap.state = SideInformationState(M, N);
    for (int i = 0; i < M; ++i) {
        std::string bits;
        if (!(in >> bits) || static_cast<int>(bits.size()) != N)
            throw std::runtime_error("snapshot: wants row " + std::to_string(i + 1) +
                                     " must be " + std::to_string(N) + " bits");
        for (int j = 0; j < N; ++j) {
            if (bits[static_cast<std::size_t>(j)] == '1')
                snap.state.wants[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
            else if (bits[static_cast<std::size_t>(j)] != '0')
                throw std::runtime_error("snapshot: wants rows must be 0/1 strings");
        }
    }

    snap.model = ErasureModel(M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            double v;
            if (!(in >> v)) throw std::runtime_error("snapshot: cannot read erasure matrix");
            if (!(v >= 0.0) || v >= 1.0)
                throw std::runtime_error("snapshot: erasure probabilities must lie in [0, 1)");
            if (i == j && v != 0.0)
                throw std::runtime_error("snapshot: the erasure-matrix diagonal must be zero");
            snap.model.set(i, j, v);
        }
    }
    for (int i = 0; i < M; ++i) {
        double v;
        if (!(in >> v)) throw std::runtime_error("snapshot: cannot read base-station erasures");
        if (!(v >= 0.0) || v >= 1.0)
            throw std::runtime_error("snapshot: base-station erasures must lie in [0, 1)");
        snap.model.q[static_cast<std::size_t>(i)] = v;
    }

    snap.delays.resize(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        long long d;
        if (!(in >> d) || d < 0) throw std::runtime_error("snapshot: delays must be non-negative integers");
        snap.delays[static_cast<std::size_t>(i)] = d;
    }
    snap.initialWants.resize(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        int w;
        if (!(in >> w) || w < 0)
            throw std::runtime_error("snapshot: initial wants counts must be non-negative integers");
        snap.initialWants[static_cast<std::size_t>(i)] = w;
    }
    return snap;
}

Snapshot read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
    return read_snapshot(in);
}

void write_snapshot(const Snapshot& snap, std::ostream& out) {
    const int M = snap.state.players;
    const int N = snap.state.packets;
    out << M << ' ' << N << '\n';
    for (int i = 0; i < M; ++i) {
        std::string bits(static_cast<std::size_t>(N), '0');
        for (int j = 0; j < N; ++j)
            if (snap.state.wants[static_cast<std::size_t>(i)].test(static_cast<std::size_t>(j)))
                bits[static_cast<std::size_t>(j)] = '1';
        out << bits << '\n';
    }
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            if (j) out << ' ';
            out << format_double(snap.model.at(i, j));
        }
        out << '\n';
    }
    for (int i = 0; i < M; ++i) {
        if (i) out << ' ';
        out << format_double(snap.model.q[static_cast<std::size_t>(i)]);
    }
    out << '\n';
    for (int i = 0; i < M; ++i) {
        if (i) out << ' ';
        out << snap.delays[static_cast<std::size_t>(i)];
    }
    out << '\n';
    for (int i = 0; i < M; ++i) {
        if (i) out << ' ';
        out << snap.initialWants[static_cast<std::size_t>(i)];
    }
    out << '\n';
}

void write_snapshot_file(const Snapshot& snap, const std::string& path) {
    std::ostringstream ss;
    write_snapshot(snap, ss);
    write_text_file(path, ss.str());
}

Session snapshot_session(const Snapshot& snap, GameMode mode, int punishmentV) {
    if (snap.delays.size() != static_cast<std::size_t>(snap.state.players) ||
        snap.initialWants.size() != static_cast<std::size_t>(snap.state.players))
        throw std::invalid_argument("snapshot_session: vector sizes must match player count");
    Session sess = make_session(snap.state, snap.model, mode, punishmentV);
    sess.ledger.cumulativeDelay = snap.delays;
    sess.ledger.initialWants = snap.initialWants;
    return sess;
}

} // namespace cdex
