#include "citescope/map_equation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include "citescope/detail/subproblem.hpp"
#include "citescope/errors.hpp"

namespace citescope {

namespace {

inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Weighted graph the optimizer works on. Nodes carry flow mass and the count
// of original nodes they represent; an edge weight is the summed
// (1 - tau) * visit(u) / outdeg(u) over the original edges it represents.
// Self-loops are dropped, they never cross a module boundary.
struct FlowGraph {
    std::vector<double> flow;
    std::vector<std::uint32_t> phys;
    // flow on edges leaving the optimized node set entirely (sub-problems);
    // always charged to the node's module exit
    std::vector<double> bonus;
    std::vector<std::uint32_t> out_off, out_to;
    std::vector<double> out_w;
    std::vector<std::uint32_t> in_off, in_to;
    std::vector<double> in_w;
    double tau = 0.15;
    std::uint64_t total_phys = 0;  // node count of the original graph
    double node_flow_plogp = 0.0;  // sum of plogp(visit rate) over original nodes

    std::uint32_t size() const { return static_cast<std::uint32_t>(flow.size()); }
};

void build_csr(FlowGraph& g, std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, double>>& edges) {
    const std::uint32_t n = g.size();
    g.out_off.assign(n + 1, 0);
    g.in_off.assign(n + 1, 0);
    for (const auto& e : edges) {
        ++g.out_off[e.first.first + 1];
        ++g.in_off[e.first.second + 1];
    }
    std::partial_sum(g.out_off.begin(), g.out_off.end(), g.out_off.begin());
    std::partial_sum(g.in_off.begin(), g.in_off.end(), g.in_off.begin());
    g.out_to.resize(edges.size());
    g.out_w.resize(edges.size());
    g.in_to.resize(edges.size());
    g.in_w.resize(edges.size());
    std::vector<std::uint32_t> opos(g.out_off.begin(), g.out_off.end() - 1);
    std::vector<std::uint32_t> ipos(g.in_off.begin(), g.in_off.end() - 1);
    for (const auto& e : edges) {
        auto [u, v] = e.first;
        g.out_to[opos[u]] = v;
        g.out_w[opos[u]++] = e.second;
        g.in_to[ipos[v]] = u;
        g.in_w[ipos[v]++] = e.second;
    }
}

FlowGraph make_flow_graph(const CitationGraph& graph, const FlowDistribution& flow) {
    if (flow.visit_rate.size() != graph.node_count())
        throw DataError("flow distribution does not match the graph");
    FlowGraph g;
    const std::uint32_t n = static_cast<std::uint32_t>(graph.node_count());
    g.flow = flow.visit_rate;
    g.phys.assign(n, 1);
    g.bonus.assign(n, 0.0);
    g.tau = flow.teleport_prob;
    g.total_phys = n;
    for (double p : g.flow) g.node_flow_plogp += plogp(p);

    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, double>> edges;
    edges.reserve(graph.edge_count());
    for (auto [u, v] : graph.edges()) {
        const double w = (1.0 - g.tau) * g.flow[u] / static_cast<double>(graph.out_degree(u));
        edges.push_back({{u, v}, w});
    }
    build_csr(g, edges);
    return g;
}

// Merges nodes of equal module into super-nodes. module_of must be compact.
FlowGraph aggregate(const FlowGraph& g, std::span<const std::uint32_t> module_of,
                    std::uint32_t module_count) {
    FlowGraph out;
    out.tau = g.tau;
    out.total_phys = g.total_phys;
    out.node_flow_plogp = g.node_flow_plogp;
    out.flow.assign(module_count, 0.0);
    out.phys.assign(module_count, 0);
    out.bonus.assign(module_count, 0.0);
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        out.flow[module_of[i]] += g.flow[i];
        out.phys[module_of[i]] += g.phys[i];
        out.bonus[module_of[i]] += g.bonus[i];
    }

    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, double>> triples;
    for (std::uint32_t u = 0; u < g.size(); ++u) {
        const std::uint32_t a = module_of[u];
        for (std::uint32_t e = g.out_off[u]; e < g.out_off[u + 1]; ++e) {
            const std::uint32_t b = module_of[g.out_to[e]];
            if (a != b) triples.push_back({{a, b}, g.out_w[e]});
        }
    }
    std::stable_sort(triples.begin(), triples.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, double>> edges;
    for (std::size_t i = 0; i < triples.size();) {
        std::size_t j = i;
        double w = 0.0;
        while (j < triples.size() && triples[j].first == triples[i].first) w += triples[j++].second;
        edges.push_back({triples[i].first, w});
        i = j;
    }
    build_csr(out, edges);
    return out;
}

// Renumber module labels by first occurrence in node order.
std::uint32_t compact_labels(std::vector<std::uint32_t>& labels) {
    std::unordered_map<std::uint32_t, std::uint32_t> seen;
    seen.reserve(labels.size());
    std::uint32_t next = 0;
    for (auto& l : labels) {
        auto [it, inserted] = seen.emplace(l, next);
        if (inserted) ++next;
        l = it->second;
    }
    return next;
}

// Per-node gather buffers reused across moves.
struct MoveScratch {
    std::vector<double> out_to, in_from;
    std::vector<std::uint32_t> stamp;
    std::vector<std::uint32_t> touched;
    std::uint32_t cur = 0;
    double out_total = 0.0;

    void ensure(std::size_t capacity) {
        if (out_to.size() < capacity) {
            out_to.resize(capacity, 0.0);
            in_from.resize(capacity, 0.0);
            stamp.resize(capacity, 0);
        }
    }
    void begin() {
        ++cur;
        touched.clear();
        out_total = 0.0;
    }
    void touch(std::uint32_t m) {
        if (stamp[m] != cur) {
            stamp[m] = cur;
            out_to[m] = 0.0;
            in_from[m] = 0.0;
            touched.push_back(m);
        }
    }
    double flow_to(std::uint32_t m) const { return stamp[m] == cur ? out_to[m] : 0.0; }
    double flow_from(std::uint32_t m) const { return stamp[m] == cur ? in_from[m] : 0.0; }
};

// Cached module aggregates for incremental map-equation evaluation.
class MapEqCore {
public:
    static constexpr std::uint32_t kNew = UINT32_MAX;

    MapEqCore(const FlowGraph& g, std::vector<std::uint32_t> module_of)
        : g_(&g), module_of_(std::move(module_of)) {
        if (module_of_.size() != g_->size())
            throw DataError("module assignment does not cover every node");
        std::uint32_t cap = 0;
        for (std::uint32_t m : module_of_) {
            if (m == kNew) throw DataError("node without module");
            cap = std::max(cap, m + 1);
        }
        capacity_ = std::max<std::uint32_t>(cap, g_->size());
        rebuild();
    }

    const FlowGraph& graph() const { return *g_; }
    const std::vector<std::uint32_t>& assignment() const { return module_of_; }
    std::uint32_t module_of(std::uint32_t node) const { return module_of_[node]; }
    std::uint32_t nonempty_count() const { return nonempty_; }
    const std::set<std::uint32_t>& nonempty_modules() const { return nonempty_set_; }
    std::uint32_t members(std::uint32_t m) const { return mod_members_[m]; }
    std::uint32_t capacity() const { return capacity_; }

    double codelength() const {
        return plogp(sum_q_) - 2.0 * sum_plogp_q_ + sum_plogp_qp_ - g_->node_flow_plogp;
    }

    // Recomputes every aggregate from the assignment; kills float drift.
    void rebuild() {
        mod_flow_.assign(capacity_, 0.0);
        mod_exit_.assign(capacity_, 0.0);
        mod_bonus_.assign(capacity_, 0.0);
        mod_phys_.assign(capacity_, 0);
        mod_members_.assign(capacity_, 0);
        for (std::uint32_t i = 0; i < g_->size(); ++i) {
            const std::uint32_t m = module_of_[i];
            mod_flow_[m] += g_->flow[i];
            mod_bonus_[m] += g_->bonus[i];
            mod_phys_[m] += g_->phys[i];
            ++mod_members_[m];
        }
        for (std::uint32_t u = 0; u < g_->size(); ++u)
            for (std::uint32_t e = g_->out_off[u]; e < g_->out_off[u + 1]; ++e)
                if (module_of_[u] != module_of_[g_->out_to[e]])
                    mod_exit_[module_of_[u]] += g_->out_w[e];

        nonempty_set_.clear();
        empty_set_.clear();
        nonempty_ = 0;
        sum_q_ = sum_plogp_q_ = sum_plogp_qp_ = 0.0;
        for (std::uint32_t m = 0; m < capacity_; ++m) {
            if (mod_members_[m] == 0) {
                empty_set_.insert(m);
                continue;
            }
            nonempty_set_.insert(m);
            ++nonempty_;
            const double q = exit_flow(m);
            sum_q_ += q;
            sum_plogp_q_ += plogp(q);
            sum_plogp_qp_ += plogp(q + mod_flow_[m]);
        }
    }

    void gather(std::uint32_t u, MoveScratch& s) const {
        s.ensure(capacity_);
        s.begin();
        for (std::uint32_t e = g_->out_off[u]; e < g_->out_off[u + 1]; ++e) {
            const std::uint32_t m = module_of_[g_->out_to[e]];
            s.touch(m);
            s.out_to[m] += g_->out_w[e];
            s.out_total += g_->out_w[e];
        }
        for (std::uint32_t e = g_->in_off[u]; e < g_->in_off[u + 1]; ++e) {
            const std::uint32_t m = module_of_[g_->in_to[e]];
            s.touch(m);
            s.in_from[m] += g_->in_w[e];
        }
    }

    double delta_gathered(std::uint32_t u, std::uint32_t target, const MoveScratch& s) const {
        const std::uint32_t a = module_of_[u];
        if (target == a) return 0.0;
        const bool fresh = target == kNew;

        const double pu = g_->flow[u];
        const double xu = g_->bonus[u];
        const std::uint32_t cu = g_->phys[u];

        const double pa = mod_flow_[a], ea = mod_exit_[a], xa = mod_bonus_[a];
        const double qa = exit_flow(a);
        const double pb = fresh ? 0.0 : mod_flow_[target];
        const double eb = fresh ? 0.0 : mod_exit_[target];
        const double xb = fresh ? 0.0 : mod_bonus_[target];
        const double qb = fresh ? 0.0 : exit_flow(target);
        const std::uint32_t ca = mod_phys_[a];
        const std::uint32_t cb = fresh ? 0 : mod_phys_[target];

        const double out_a = s.flow_to(a), in_a = s.flow_from(a);
        const double out_b = fresh ? 0.0 : s.flow_to(target);
        const double in_b = fresh ? 0.0 : s.flow_from(target);

        const double pa2 = pa - pu, pb2 = pb + pu;
        const std::uint32_t ca2 = ca - cu, cb2 = cb + cu;
        double ea2 = ea - (s.out_total - out_a) + in_a;
        double xa2 = xa - xu;
        if (mod_members_[a] == 1) ea2 = xa2 = 0.0;  // module empties, cancel exactly
        const double eb2 = eb + (s.out_total - out_b) - in_b;
        const double qa2 = exit_flow(ea2 + xa2, pa2, ca2);
        const double qb2 = exit_flow(eb2 + xb + xu, pb2, cb2);

        const double sum_q2 = sum_q_ - qa - qb + qa2 + qb2;
        return (plogp(sum_q2) - plogp(sum_q_)) -
               2.0 * (plogp(qa2) + plogp(qb2) - plogp(qa) - plogp(qb)) +
               (plogp(qa2 + pa2) + plogp(qb2 + pb2) - plogp(qa + pa) - plogp(qb + pb));
    }

    // Applies the move; target may be kNew for a fresh module.
    void move_gathered(std::uint32_t u, std::uint32_t target, const MoveScratch& s) {
        const std::uint32_t a = module_of_[u];
        const bool fresh = target == kNew;
        const std::uint32_t b = fresh ? allocate_module() : target;
        if (b == a) return;

        const double qa = exit_flow(a), qb = exit_flow(b);
        sum_q_ -= qa + qb;
        sum_plogp_q_ -= plogp(qa) + plogp(qb);
        sum_plogp_qp_ -= plogp(qa + mod_flow_[a]) + plogp(qb + mod_flow_[b]);

        const double out_a = s.flow_to(a), in_a = s.flow_from(a);
        // An empty target has no incident edges by definition.
        const double out_b = fresh ? 0.0 : s.flow_to(b);
        const double in_b = fresh ? 0.0 : s.flow_from(b);

        mod_exit_[a] += -(s.out_total - out_a) + in_a;
        mod_exit_[b] += (s.out_total - out_b) - in_b;
        mod_flow_[a] -= g_->flow[u];
        mod_flow_[b] += g_->flow[u];
        mod_bonus_[a] -= g_->bonus[u];
        mod_bonus_[b] += g_->bonus[u];
        mod_phys_[a] -= g_->phys[u];
        mod_phys_[b] += g_->phys[u];
        --mod_members_[a];
        ++mod_members_[b];
        module_of_[u] = b;

        if (mod_members_[a] == 0) {
            mod_exit_[a] = 0.0;
            mod_bonus_[a] = 0.0;
            mod_flow_[a] = 0.0;
            nonempty_set_.erase(a);
            empty_set_.insert(a);
            --nonempty_;
        } else {
            if (mod_exit_[a] < 0.0) mod_exit_[a] = 0.0;    // cancellation noise
            if (mod_bonus_[a] < 0.0) mod_bonus_[a] = 0.0;
        }
        if (mod_members_[b] == 1) {
            nonempty_set_.insert(b);
            ++nonempty_;
        }

        const double qa2 = exit_flow(a), qb2 = exit_flow(b);
        sum_q_ += qa2 + qb2;
        sum_plogp_q_ += plogp(qa2) + plogp(qb2);
        sum_plogp_qp_ += plogp(qa2 + mod_flow_[a]) + plogp(qb2 + mod_flow_[b]);
    }

    double delta(std::uint32_t u, std::uint32_t target, MoveScratch& s) const {
        gather(u, s);
        return delta_gathered(u, target, s);
    }

    void move(std::uint32_t u, std::uint32_t target, MoveScratch& s) {
        gather(u, s);
        move_gathered(u, target, s);
    }

private:
    double exit_flow(double combined_edge_exit, double p, std::uint32_t phys_count) const {
        const double n = static_cast<double>(g_->total_phys);
        return combined_edge_exit + g_->tau * p * (n - static_cast<double>(phys_count)) / n;
    }
    double exit_flow(std::uint32_t m) const {
        if (mod_members_[m] == 0) return 0.0;
        return exit_flow(mod_exit_[m] + mod_bonus_[m], mod_flow_[m], mod_phys_[m]);
    }

    std::uint32_t allocate_module() {
        if (!empty_set_.empty()) {
            const std::uint32_t m = *empty_set_.begin();
            empty_set_.erase(empty_set_.begin());
            return m;
        }
        ++capacity_;
        mod_flow_.push_back(0.0);
        mod_exit_.push_back(0.0);
        mod_bonus_.push_back(0.0);
        mod_phys_.push_back(0);
        mod_members_.push_back(0);
        return capacity_ - 1;
    }

    const FlowGraph* g_;
    std::vector<std::uint32_t> module_of_;
    std::uint32_t capacity_ = 0;
    std::vector<double> mod_flow_, mod_exit_, mod_bonus_;
    std::vector<std::uint32_t> mod_phys_, mod_members_;
    std::set<std::uint32_t> nonempty_set_, empty_set_;
    std::uint32_t nonempty_ = 0;
    double sum_q_ = 0.0, sum_plogp_q_ = 0.0, sum_plogp_qp_ = 0.0;
};

// One pass over all nodes in shuffled order, applying the best improving
// single-node move. Ties between equal deltas go to the lowest module index;
// the fresh-module candidate is considered last.
bool sweep(MapEqCore& core, std::mt19937_64& rng, double min_gain, MoveScratch& s,
           std::vector<std::uint32_t>& order, std::vector<std::uint32_t>& candidates) {
    const std::uint32_t n = core.graph().size();
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);

    constexpr double kTieEps = 1e-14;
    bool moved = false;
    for (std::uint32_t u : order) {
        core.gather(u, s);
        const std::uint32_t a = core.module_of(u);

        candidates.clear();
        if (core.nonempty_count() <= 64 || n <= 256) {
            for (std::uint32_t m : core.nonempty_modules()) candidates.push_back(m);
        } else {
            candidates.assign(s.touched.begin(), s.touched.end());
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        }

        double best_delta = 0.0;
        std::uint32_t best_target = a;
        for (std::uint32_t m : candidates) {
            if (m == a) continue;
            const double d = core.delta_gathered(u, m, s);
            if (d < best_delta - kTieEps) {
                best_delta = d;
                best_target = m;
            }
        }
        if (core.members(a) > 1) {
            const double d = core.delta_gathered(u, MapEqCore::kNew, s);
            if (d < best_delta - kTieEps) {
                best_delta = d;
                best_target = MapEqCore::kNew;
            }
        }
        if (best_delta < -min_gain) {
            core.move_gathered(u, best_target, s);
            moved = true;
        }
    }
    return moved;
}

struct TrialResult {
    std::vector<std::uint32_t> module_of;  // over the original graph's nodes
    double codelength = 0.0;
    std::vector<double> trace;
};

// One trial: leaf-level sweeps, an aggregation climb, then fine-tuning
// passes that re-sweep single nodes out of the coarse modules; the whole
// cycle repeats while it still gains at least min_gain bits.
TrialResult run_trial(const FlowGraph& top, std::uint64_t trial_seed, double min_gain) {
    std::mt19937_64 rng(trial_seed);
    TrialResult result;

    std::vector<std::uint32_t> assignment(top.size());
    std::iota(assignment.begin(), assignment.end(), 0u);

    MoveScratch scratch;
    std::vector<std::uint32_t> order, candidates, identity;
    double last = std::numeric_limits<double>::infinity();
    bool recorded_start = false;

    while (true) {
        // fine-tune at leaf level from the current assignment
        MapEqCore core(top, assignment);
        if (!recorded_start) {
            result.trace.push_back(core.codelength());
            recorded_start = true;
        }
        while (sweep(core, rng, min_gain, scratch, order, candidates)) {
        }
        core.rebuild();
        result.trace.push_back(core.codelength());
        assignment = core.assignment();

        // aggregation climb
        std::vector<std::uint32_t> node_of_orig = assignment;
        const std::uint32_t groups = compact_labels(node_of_orig);
        if (groups < top.size()) {
            FlowGraph owned = aggregate(top, node_of_orig, groups);
            const FlowGraph* cur = &owned;
            while (true) {
                identity.resize(cur->size());
                std::iota(identity.begin(), identity.end(), 0u);
                MapEqCore agg_core(*cur, identity);
                bool any = false;
                while (sweep(agg_core, rng, min_gain, scratch, order, candidates)) any = true;
                if (!any) break;
                std::vector<std::uint32_t> labels = agg_core.assignment();
                const std::uint32_t count = compact_labels(labels);
                if (count == cur->size()) break;
                for (auto& m : node_of_orig) m = labels[m];
                FlowGraph next = aggregate(*cur, labels, count);
                owned = std::move(next);
                cur = &owned;
            }
            assignment = node_of_orig;
        }

        MapEqCore final_core(top, assignment);
        const double codelength_now = final_core.codelength();
        result.trace.push_back(codelength_now);
        if (codelength_now >= last - min_gain) {
            last = std::min(last, codelength_now);
            break;
        }
        last = codelength_now;
    }

    result.module_of = std::move(assignment);
    compact_labels(result.module_of);
    result.codelength = last;
    return result;
}

}  // namespace

double codelength(const CitationGraph& graph, const FlowDistribution& flow,
                  std::span<const std::uint32_t> module_of) {
    const std::size_t n = graph.node_count();
    if (module_of.size() != n) throw DataError("node without module assignment");
    if (flow.visit_rate.size() != n) throw DataError("flow distribution does not match the graph");
    for (std::uint32_t m : module_of)
        if (m == UINT32_MAX) throw DataError("node without module assignment");
    if (n == 0) return 0.0;

    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    for (std::uint32_t m : module_of) remap.emplace(m, static_cast<std::uint32_t>(remap.size()));
    const std::size_t mods = remap.size();

    std::vector<double> mod_flow(mods, 0.0), mod_exit(mods, 0.0);
    std::vector<std::uint64_t> mod_nodes(mods, 0);
    std::vector<std::vector<std::uint32_t>> members(mods);
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t m = remap.at(module_of[i]);
        mod_flow[m] += flow.visit_rate[i];
        ++mod_nodes[m];
        members[m].push_back(i);
    }
    const double tau = flow.teleport_prob;
    for (auto [u, v] : graph.edges()) {
        const std::uint32_t mu = remap.at(module_of[u]), mv = remap.at(module_of[v]);
        if (mu != mv)
            mod_exit[mu] += (1.0 - tau) * flow.visit_rate[u] / static_cast<double>(graph.out_degree(u));
    }

    std::vector<double> q(mods);
    double q_total = 0.0;
    for (std::size_t m = 0; m < mods; ++m) {
        q[m] = mod_exit[m] + tau * mod_flow[m] *
                                 (static_cast<double>(n) - static_cast<double>(mod_nodes[m])) /
                                 static_cast<double>(n);
        q_total += q[m];
    }

    double L = 0.0;
    if (q_total > 0.0) {
        double h = 0.0;
        for (std::size_t m = 0; m < mods; ++m)
            if (q[m] > 0.0) h -= (q[m] / q_total) * std::log2(q[m] / q_total);
        L += q_total * h;
    }
    for (std::size_t m = 0; m < mods; ++m) {
        const double pm = q[m] + mod_flow[m];
        if (pm <= 0.0) continue;
        double h = 0.0;
        if (q[m] > 0.0) h -= (q[m] / pm) * std::log2(q[m] / pm);
        for (std::uint32_t i : members[m]) {
            const double x = flow.visit_rate[i];
            if (x > 0.0) h -= (x / pm) * std::log2(x / pm);
        }
        L += pm * h;
    }
    return L;
}

struct MapEquationState::Impl {
    FlowGraph graph;
    MapEqCore core;
    MoveScratch scratch;

    Impl(const CitationGraph& g, const FlowDistribution& f, std::vector<std::uint32_t> module_of)
        : graph(make_flow_graph(g, f)), core(graph, std::move(module_of)) {}
};

MapEquationState::MapEquationState(const CitationGraph& graph, const FlowDistribution& flow,
                                   std::vector<std::uint32_t> module_of)
    : impl_(std::make_unique<Impl>(graph, flow, std::move(module_of))) {}

MapEquationState::~MapEquationState() = default;
MapEquationState::MapEquationState(MapEquationState&&) noexcept = default;
MapEquationState& MapEquationState::operator=(MapEquationState&&) noexcept = default;

double MapEquationState::delta_codelength(std::uint32_t node, std::uint32_t target_module) const {
    if (node >= impl_->graph.size()) throw DataError("node index out of range");
    const std::uint32_t target = target_module == kNewModule ? MapEqCore::kNew : target_module;
    return impl_->core.delta(node, target, impl_->scratch);
}

void MapEquationState::move(std::uint32_t node, std::uint32_t target_module) {
    if (node >= impl_->graph.size()) throw DataError("node index out of range");
    const std::uint32_t target = target_module == kNewModule ? MapEqCore::kNew : target_module;
    impl_->core.move(node, target, impl_->scratch);
}

double MapEquationState::codelength() const { return impl_->core.codelength(); }

std::uint32_t MapEquationState::module_of(std::uint32_t node) const {
    return impl_->core.module_of(node);
}

std::uint32_t MapEquationState::module_count() const { return impl_->core.nonempty_count(); }

Partition optimize_two_level(const CitationGraph& graph, const FlowDistribution& flow,
                             const TwoLevelOptions& opts) {
    if (opts.trials < 1) throw DataError("trials must be at least 1");
    Partition best;
    if (graph.node_count() == 0) return best;

    const FlowGraph top = make_flow_graph(graph, flow);
    std::vector<TrialResult> results(static_cast<std::size_t>(opts.trials));

#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < opts.trials; ++t)
        results[static_cast<std::size_t>(t)] =
            run_trial(top, splitmix64(opts.seed + static_cast<std::uint64_t>(t)), opts.min_gain);

    std::size_t winner = 0;
    for (std::size_t t = 1; t < results.size(); ++t)
        if (results[t].codelength < results[winner].codelength) winner = t;

    best.module_of = std::move(results[winner].module_of);
    best.module_count = compact_labels(best.module_of);
    best.trace = std::move(results[winner].trace);
    best.codelength = codelength(graph, flow, best.module_of);
    return best;
}

Partition optimize_two_level(const CitationGraph& graph, const FlowDistribution& flow,
                             std::uint64_t seed, int trials) {
    TwoLevelOptions opts;
    opts.seed = seed;
    opts.trials = trials;
    return optimize_two_level(graph, flow, opts);
}

namespace detail {

SubResult optimize_subproblem(const SubProblem& sub, std::uint64_t seed, int trials,
                              double min_gain) {
    if (trials < 1) throw DataError("trials must be at least 1");
    const std::uint32_t n = static_cast<std::uint32_t>(sub.flow.size());
    SubResult result;
    if (n == 0) return result;

    FlowGraph g;
    g.flow = sub.flow;
    g.bonus = sub.exit_bonus;
    g.phys.assign(n, 1);
    g.tau = sub.tau;
    g.total_phys = sub.parent_node_count;
    for (double p : g.flow) g.node_flow_plogp += plogp(p);
    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, double>> edges;
    edges.reserve(sub.edges.size());
    for (std::size_t e = 0; e < sub.edges.size(); ++e)
        edges.push_back({sub.edges[e], sub.edge_flow[e]});
    build_csr(g, edges);

    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < trials; ++t)
        results[static_cast<std::size_t>(t)] =
            run_trial(g, splitmix64(seed + static_cast<std::uint64_t>(t)), min_gain);

    std::size_t winner = 0;
    for (std::size_t t = 1; t < results.size(); ++t)
        if (results[t].codelength < results[winner].codelength) winner = t;

    result.module_of = std::move(results[winner].module_of);
    result.module_count = compact_labels(result.module_of);
    MapEqCore exact(g, result.module_of);
    result.codelength = exact.codelength();
    return result;
}

}  // namespace detail

}  // namespace citescope
