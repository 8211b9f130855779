#include "cdex/equilibrium.hpp"

#include <cstdio>
#include <stdexcept>

namespace cdex {

namespace {

constexpr int kEnumerationCapPlayers = 16;

double int_fraction(std::uint64_t mask, int M) {
    return static_cast<double>(__builtin_popcountll(mask)) / static_cast<double>(M);
}

// Game-1 stage cost (deterministic mode) of a stage whose delayed players are
// `delayedMask`: the estimate max norm after charging them one unit each.
double delayed_cost(const StageContext& ctx, std::uint64_t delayedMask) {
    double best = 0.0;
    for (int i = 0; i < ctx.players; ++i) {
        double c = ((delayedMask >> i) & 1u) ? ctx.estimatePlus[static_cast<std::size_t>(i)]
                                             : ctx.estimate[static_cast<std::size_t>(i)];
        if (c > best) best = c;
    }
    return best;
}

} // namespace

StageContext make_stage_context(const Session& sess, SelectorKind selector) {
    const int M = sess.players();
    if (M > 64) throw std::invalid_argument("make_stage_context: M <= 64");
    StageContext ctx;
    ctx.players = M;
    ctx.wantsMask = wants_indicator(sess.state);
    ctx.pbar = sess.model.average_erasure();

    ctx.estimate.resize(static_cast<std::size_t>(M));
    ctx.estimatePlus.resize(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        double w0 = static_cast<double>(sess.ledger.initialWants[static_cast<std::size_t>(i)]);
        double d = static_cast<double>(sess.ledger.cumulativeDelay[static_cast<std::size_t>(i)]);
        double p = ctx.pbar[static_cast<std::size_t>(i)];
        ctx.estimate[static_cast<std::size_t>(i)] = completion_estimate_one(w0, d, p);
        ctx.estimatePlus[static_cast<std::size_t>(i)] = completion_estimate_one(w0, d + 1.0, p);
        if (ctx.estimate[static_cast<std::size_t>(i)] > ctx.costPrev)
            ctx.costPrev = ctx.estimate[static_cast<std::size_t>(i)];
    }

    for (int i = 0; i < M; ++i) {
        if (!((ctx.wantsMask >> i) & 1u)) continue;
        if (ctx.estimatePlus[static_cast<std::size_t>(i)] > ctx.costPrev)
            ctx.criticalSet |= (std::uint64_t{1} << i);
    }

    ctx.kappas = stage_kappas(sess, selector);
    ctx.targets.resize(static_cast<std::size_t>(M));
    ctx.delayed.resize(static_cast<std::size_t>(M));
    ctx.yPerPlayer.resize(static_cast<std::size_t>(M));
    ctx.costSingletonGame1.resize(static_cast<std::size_t>(M));
    ctx.costSingletonGame2.resize(static_cast<std::size_t>(M));

    ctx.costSilentGame1 = delayed_cost(ctx, ctx.wantsMask);
    ctx.y0 = ctx.costSilentGame1 - ctx.costPrev;
    ctx.y0Defined = ctx.criticalSet != 0;
    double wFrac = int_fraction(ctx.wantsMask, M);
    ctx.costSilentGame2 = ctx.costSilentGame1 + wFrac;

    for (int j = 0; j < M; ++j) {
        ctx.targets[static_cast<std::size_t>(j)] = target_set(ctx.kappas[static_cast<std::size_t>(j)], sess.state);
        ctx.delayed[static_cast<std::size_t>(j)] = ctx.wantsMask & ~ctx.targets[static_cast<std::size_t>(j)];
        double c1 = delayed_cost(ctx, ctx.delayed[static_cast<std::size_t>(j)]);
        ctx.costSingletonGame1[static_cast<std::size_t>(j)] = c1;
        ctx.yPerPlayer[static_cast<std::size_t>(j)] = c1 - ctx.costPrev;
        // Same evaluation order as the game-2 utility: norm, then the
        // transmission charge, then the mean delay increment.
        ctx.costSingletonGame2[static_cast<std::size_t>(j)] =
            (c1 + 1.0) + int_fraction(ctx.delayed[static_cast<std::size_t>(j)], M);
        if (c1 < ctx.costSilentGame1) ctx.helperSet |= (std::uint64_t{1} << j);
    }
    return ctx;
}

std::uint64_t critical_set(const Session& sess) { return compute_critical_set(sess); }

YValues y_values(const Session& sess, SelectorKind selector) {
    StageContext ctx = make_stage_context(sess, selector);
    YValues y;
    y.y0 = ctx.y0;
    y.y0Defined = ctx.y0Defined;
    y.perPlayer = ctx.yPerPlayer;
    return y;
}

std::uint64_t helper_set(const YValues& y) {
    std::uint64_t z = 0;
    for (std::size_t j = 0; j < y.perPlayer.size(); ++j)
        if (y.perPlayer[j] < y.y0) z |= (std::uint64_t{1} << j);
    return z;
}

std::vector<std::uint64_t> ne_set_game1(const StageContext& ctx) {
    const int M = ctx.players;
    if (M > kEnumerationCapPlayers)
        throw std::runtime_error("ne_set_game1: profile enumeration capped at M <= 16");
    const std::uint64_t limit = std::uint64_t{1} << M;
    std::vector<std::uint64_t> ne;
    if (ctx.helperSet == 0) {
        ne.reserve(static_cast<std::size_t>(limit));
        for (std::uint64_t p = 0; p < limit; ++p) ne.push_back(p);
        return ne;
    }
    for (std::uint64_t p = 1; p < limit; ++p) {
        int k = __builtin_popcountll(p);
        if (k == 1 || k > 2 || (k == 2 && (p & ctx.helperSet) == 0)) ne.push_back(p);
    }
    return ne;
}

std::vector<std::uint64_t> ne_set_game2(const StageContext& ctx) {
    const int M = ctx.players;
    if (M > kEnumerationCapPlayers)
        throw std::runtime_error("ne_set_game2: profile enumeration capped at M <= 16");
    std::vector<std::uint64_t> ne;
    bool silentIsNe = true;
    for (int j = 0; j < M; ++j)
        if (ctx.costSingletonGame2[static_cast<std::size_t>(j)] < ctx.costSilentGame2) silentIsNe = false;
    if (silentIsNe) ne.push_back(0);
    for (int j = 0; j < M; ++j)
        if (ctx.costSingletonGame2[static_cast<std::size_t>(j)] <= ctx.costSilentGame2)
            ne.push_back(std::uint64_t{1} << j);
    return ne;
}

std::vector<std::uint64_t> ne_set_game1(const Session& sess) {
    return ne_set_game1(make_stage_context(sess));
}
std::vector<std::uint64_t> ne_set_game2(const Session& sess) {
    return ne_set_game2(make_stage_context(sess));
}

double poa_game1(const StageContext& ctx) {
    double minc = 0.0, maxc = 0.0;
    for (int j = 0; j < ctx.players; ++j) {
        double c = ctx.costSingletonGame1[static_cast<std::size_t>(j)];
        if (j == 0 || c < minc) minc = c;
        if (j == 0 || c > maxc) maxc = c;
    }
    if (!(maxc > 0.0)) return 1.0;
    return minc / maxc;
}

PoaGame2 poa_game2(const StageContext& ctx) {
    PoaGame2 r;
    bool first = true;
    double minc = 0.0, maxc = 0.0;
    auto fold = [&](double c) {
        if (first || c < minc) minc = c;
        if (first || c > maxc) maxc = c;
        first = false;
    };
    bool silentIsNe = true;
    for (int j = 0; j < ctx.players; ++j)
        if (ctx.costSingletonGame2[static_cast<std::size_t>(j)] < ctx.costSilentGame2) silentIsNe = false;
    if (silentIsNe) fold(ctx.costSilentGame2);
    for (int j = 0; j < ctx.players; ++j)
        if (ctx.costSingletonGame2[static_cast<std::size_t>(j)] <= ctx.costSilentGame2)
            fold(ctx.costSingletonGame2[static_cast<std::size_t>(j)]);
    r.poa = (!first && maxc > 0.0) ? minc / maxc : 1.0;

    if (ctx.helperSet != 0) {
        double minYZ = 0.0;
        bool haveY = false;
        for (int j = 0; j < ctx.players; ++j) {
            if (!((ctx.helperSet >> j) & 1u)) continue;
            double y = ctx.yPerPlayer[static_cast<std::size_t>(j)];
            if (!haveY || y < minYZ) minYZ = y;
            haveY = true;
        }
        r.lowerBound = 1.0 - (1.0 + ctx.y0 - minYZ) / (ctx.costPrev + 2.0 + ctx.y0);
    } else {
        r.lowerBound = 1.0 - 1.0 / (ctx.costPrev + 2.0 + ctx.y0);
    }
    return r;
}

double poa_game1(const Session& sess) { return poa_game1(make_stage_context(sess)); }
PoaGame2 poa_game2(const Session& sess) { return poa_game2(make_stage_context(sess)); }

BruteForceResult brute_force_ne(const Session& sess, GameMode mode, ChannelMode channel,
                                SelectorKind selector) {
    const int M = sess.players();
    if (M > kEnumerationCapPlayers)
        throw std::runtime_error("brute_force_ne: profile enumeration capped at M <= 16");
    if (channel == ChannelMode::realized)
        throw std::invalid_argument("brute_force_ne: equilibrium enumeration needs an analytic channel mode");

    std::vector<PacketCombination> kappas = stage_kappas(sess, selector);
    std::uint64_t allowed = ~std::uint64_t{0};
    if (mode == GameMode::game2) {
        allowed = (M == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << M) - 1);
        for (std::uint64_t column : sess.ledger.collisionWindow) allowed &= ~column;
    } else {
        allowed = (M == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << M) - 1);
    }

    const std::uint64_t limit = std::uint64_t{1} << M;
    std::vector<double> utility(static_cast<std::size_t>(limit), 0.0);
    std::vector<std::uint8_t> feasible(static_cast<std::size_t>(limit), 0);
    for (std::uint64_t p = 0; p < limit; ++p) {
        if (p & ~allowed) continue;
        feasible[static_cast<std::size_t>(p)] = 1;
        utility[static_cast<std::size_t>(p)] =
            (mode == GameMode::game1) ? utility_game1(sess, p, kappas, channel)
                                      : utility_game2(sess, p, kappas, channel);
    }

    BruteForceResult res;
    double bestNeUtility = 0.0, worstNeUtility = 0.0;
    for (std::uint64_t p = 0; p < limit; ++p) {
        if (!feasible[static_cast<std::size_t>(p)]) continue;
        bool isNe = true;
        for (int i = 0; i < M && isNe; ++i) {
            std::uint64_t q = p ^ (std::uint64_t{1} << i);
            if (!feasible[static_cast<std::size_t>(q)]) continue; // backed-off player cannot switch on
            if (utility[static_cast<std::size_t>(q)] > utility[static_cast<std::size_t>(p)]) isNe = false;
        }
        if (!isNe) continue;
        if (res.ne.empty() || utility[static_cast<std::size_t>(p)] > bestNeUtility)
            bestNeUtility = utility[static_cast<std::size_t>(p)];
        if (res.ne.empty() || utility[static_cast<std::size_t>(p)] < worstNeUtility)
            worstNeUtility = utility[static_cast<std::size_t>(p)];
        res.ne.push_back(p);
    }
    for (std::uint64_t p : res.ne)
        if (utility[static_cast<std::size_t>(p)] == bestNeUtility) res.pone.push_back(p);
    res.minNeCost = -bestNeUtility;
    res.maxNeCost = -worstNeUtility;
    res.poaRatio = (res.maxNeCost > 0.0) ? res.minNeCost / res.maxNeCost : 1.0;
    return res;
}

namespace {

std::uint64_t pone_bits(const StageContext& ctx, GameMode mode) {
    if (mode == GameMode::game1) {
        if (ctx.helperSet == 0) return 0; // every profile ties; silent is the smallest mask
        int best = 0;
        for (int j = 1; j < ctx.players; ++j)
            if (ctx.costSingletonGame1[static_cast<std::size_t>(j)] <
                ctx.costSingletonGame1[static_cast<std::size_t>(best)])
                best = j;
        return std::uint64_t{1} << best;
    }
    bool silentIsNe = true;
    for (int j = 0; j < ctx.players; ++j)
        if (ctx.costSingletonGame2[static_cast<std::size_t>(j)] < ctx.costSilentGame2) silentIsNe = false;
    double bestCost = 0.0;
    std::uint64_t bestProfile = 0;
    bool have = false;
    if (silentIsNe) {
        bestCost = ctx.costSilentGame2;
        bestProfile = 0;
        have = true;
    }
    for (int j = 0; j < ctx.players; ++j) {
        double c = ctx.costSingletonGame2[static_cast<std::size_t>(j)];
        if (c <= ctx.costSilentGame2 && (!have || c < bestCost)) {
            bestCost = c;
            bestProfile = std::uint64_t{1} << j;
            have = true;
        }
    }
    return bestProfile;
}

std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

} // namespace

StageAnalysis analyze_stage(const Session& sess, GameMode mode, SelectorKind selector) {
    StageContext ctx = make_stage_context(sess, selector);
    StageAnalysis a;
    a.criticalSet = ctx.criticalSet;
    a.helperSet = ctx.helperSet;
    a.y0 = ctx.y0;
    a.y0Defined = ctx.y0Defined;
    a.yPerPlayer = ctx.yPerPlayer;
    a.costPrev = ctx.costPrev;
    a.stage = sess.ledger.stage;
    a.poneProfile = pone_bits(ctx, mode);

    const int M = ctx.players;
    if (mode == GameMode::game1) {
        a.poa = poa_game1(ctx);
        a.poaLowerBound = a.poa; // the closed form is already the exact ratio
        std::uint64_t m = static_cast<std::uint64_t>(M);
        std::uint64_t nonZ = m - static_cast<std::uint64_t>(__builtin_popcountll(ctx.helperSet));
        if (ctx.helperSet == 0) {
            a.neCount = (M >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << M);
        } else {
            a.neCount = (std::uint64_t{1} << M) - 1 - choose2(m) + choose2(nonZ);
        }
    } else {
        PoaGame2 p = poa_game2(ctx);
        a.poa = p.poa;
        a.poaLowerBound = p.lowerBound;
        bool silentIsNe = true;
        std::uint64_t count = 0;
        for (int j = 0; j < M; ++j) {
            if (ctx.costSingletonGame2[static_cast<std::size_t>(j)] < ctx.costSilentGame2) silentIsNe = false;
            if (ctx.costSingletonGame2[static_cast<std::size_t>(j)] <= ctx.costSilentGame2) ++count;
        }
        a.neCount = count + (silentIsNe ? 1 : 0);
    }
    if (M <= kEnumerationCapPlayers)
        a.neProfiles = (mode == GameMode::game1) ? ne_set_game1(ctx) : ne_set_game2(ctx);
    return a;
}

std::string stage_analysis_csv_header() {
    return "t,critical_count,helper_count,y0,min_y,poa,poa_lower_bound,ne_count,pone_profile";
}

std::string stage_analysis_csv_row(const StageAnalysis& a, int players) {
    double minY = a.y0;
    if (a.helperSet != 0) {
        bool have = false;
        for (int j = 0; j < players; ++j) {
            if (!((a.helperSet >> j) & 1u)) continue;
            if (!have || a.yPerPlayer[static_cast<std::size_t>(j)] < minY)
                minY = a.yPerPlayer[static_cast<std::size_t>(j)];
            have = true;
        }
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.9g,%.9g,%.9g,%.9g,%llu,",
                  a.stage, __builtin_popcountll(a.criticalSet), __builtin_popcountll(a.helperSet),
                  a.y0, minY, a.poa, a.poaLowerBound,
                  static_cast<unsigned long long>(a.neCount));
    std::string row(buf);
    for (int i = 0; i < players; ++i) row += ((a.poneProfile >> i) & 1u) ? '1' : '0';
    return row;
}

} // namespace cdex
