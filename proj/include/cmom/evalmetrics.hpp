#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "cmom/mapping_graph.hpp"
#include "cmom/owl.hpp"

namespace cmom {

/// Direct sub/superclass lookups over a set of loaded ontologies, plus the
/// total target class count N used by the substitution cost.
class Hierarchy {
  public:
    void add_relation(const Iri& child, const Iri& parent) {
        supers_[child].insert(parent);
        subs_[parent].insert(child);
    }

    /// Merges the asserted named hierarchy; `counts_toward_total` marks target
    /// ontologies, whose class counts add up to N.
    void add_ontology(const Ontology& ontology, bool counts_toward_total) {
        for (const auto& [iri, cls] : ontology.classes) {
            for (const auto& parent : cls.direct_superclasses) add_relation(iri, parent);
        }
        if (counts_toward_total) {
            total_target_classes_ += static_cast<long long>(ontology.total_class_count());
        }
    }

    void set_total_target_classes(long long n) { total_target_classes_ = n; }
    [[nodiscard]] long long total_target_classes() const { return total_target_classes_; }

    [[nodiscard]] bool direct_subclass_of(const Iri& a, const Iri& b) const {
        auto it = supers_.find(a);
        return it != supers_.end() && it->second.count(b) > 0;
    }

    [[nodiscard]] bool direct_superclass_of(const Iri& a, const Iri& b) const {
        return direct_subclass_of(b, a);
    }

    [[nodiscard]] bool directly_related(const Iri& a, const Iri& b) const {
        return direct_subclass_of(a, b) || direct_superclass_of(a, b);
    }

    /// Direct neighbors in both directions: |supers| + |subs|.
    [[nodiscard]] int neighbor_count(const Iri& iri) const {
        int count = 0;
        if (auto it = supers_.find(iri); it != supers_.end()) {
            count += static_cast<int>(it->second.size());
        }
        if (auto it = subs_.find(iri); it != subs_.end()) {
            count += static_cast<int>(it->second.size());
        }
        return count;
    }

  private:
    std::unordered_map<Iri, std::set<Iri>, IriHash> supers_;
    std::unordered_map<Iri, std::set<Iri>, IriHash> subs_;
    long long total_target_classes_ = 0;
};

/// 1 for an exact or more specific prediction, 0.5 for a direct
/// generalization, 0 otherwise.
inline double relaxed_precision_entity(const Iri& e, const Iri& e_ref, const Hierarchy& hierarchy) {
    if (e == e_ref || hierarchy.direct_subclass_of(e, e_ref)) return 1.0;
    if (hierarchy.direct_superclass_of(e, e_ref)) return 0.5;
    return 0.0;
}

/// Mirror of the precision case: generalizations count fully, direct
/// specializations half.
inline double relaxed_recall_entity(const Iri& e, const Iri& e_ref, const Hierarchy& hierarchy) {
    if (e == e_ref || hierarchy.direct_superclass_of(e, e_ref)) return 1.0;
    if (hierarchy.direct_subclass_of(e, e_ref)) return 0.5;
    return 0.0;
}

struct ClassSetScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Pairs each predicted entity with at most one reference entity, greedily by
/// combined relaxed score (ties by IRI order). Precision divides by the
/// predicted count, recall by the reference count.
inline ClassSetScores class_set_scores(std::span<const Iri> predicted,
                                       std::span<const Iri> reference,
                                       const Hierarchy& hierarchy,
                                       std::vector<std::string>* warnings = nullptr) {
    ClassSetScores scores;
    if (predicted.empty()) {
        if (warnings != nullptr) warnings->push_back("empty predicted class set scores zero");
        return scores;
    }
    if (reference.empty()) return scores;

    struct Pair {
        double combined;
        double prec;
        double rec;
        size_t p;
        size_t r;
    };
    std::vector<Pair> pairs;
    for (size_t p = 0; p < predicted.size(); ++p) {
        for (size_t r = 0; r < reference.size(); ++r) {
            double prec = relaxed_precision_entity(predicted[p], reference[r], hierarchy);
            double rec = relaxed_recall_entity(predicted[p], reference[r], hierarchy);
            if (prec + rec > 0.0) pairs.push_back({prec + rec, prec, rec, p, r});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
        if (a.combined != b.combined) return a.combined > b.combined;
        if (predicted[a.p] != predicted[b.p]) return predicted[a.p] < predicted[b.p];
        return reference[a.r] < reference[b.r];
    });

    std::vector<bool> p_used(predicted.size(), false), r_used(reference.size(), false);
    double prec_sum = 0.0, rec_sum = 0.0;
    for (const auto& pair : pairs) {
        if (p_used[pair.p] || r_used[pair.r]) continue;
        p_used[pair.p] = true;
        r_used[pair.r] = true;
        prec_sum += pair.prec;
        rec_sum += pair.rec;
    }
    scores.precision = prec_sum / static_cast<double>(predicted.size());
    scores.recall = rec_sum / static_cast<double>(reference.size());
    if (scores.precision + scores.recall > 0.0) {
        scores.f1 = 2.0 * scores.precision * scores.recall / (scores.precision + scores.recall);
    }
    return scores;
}

/// Costs of the edit operations. sigma scales substitutions by entity type;
/// N (total target classes) turns neighborhood size into effort.
struct CostModel {
    double sigma_class = 0.7;
    double sigma_property = 1.0;
    double node_insert = 1.0;
    double node_delete = 0.5;
    double edge_insert_delete = 0.5;

    [[nodiscard]] double sigma(NodeKind kind) const {
        return kind == NodeKind::Property ? sigma_property : sigma_class;
    }
};

/// Substituting a node costs nothing when identical, a neighborhood-scaled
/// fraction of sigma for a direct sub/superclass, and the full sigma of the
/// candidate's kind otherwise.
inline double node_substitution_cost(const MappingGraph::Node& candidate,
                                     const MappingGraph::Node& reference,
                                     const Hierarchy& hierarchy, const CostModel& costs) {
    if (candidate.iri == reference.iri) return 0.0;
    if (hierarchy.directly_related(candidate.iri, reference.iri)) {
        long long n = hierarchy.total_target_classes();
        if (n <= 0) throw ConfigError("total target class count N is not configured");
        return costs.sigma(candidate.kind) * hierarchy.neighbor_count(candidate.iri) /
               static_cast<double>(n);
    }
    return costs.sigma(candidate.kind);
}

struct GedOptions {
    size_t exact_node_limit = 16; // non-source nodes per side
    bool allow_approximate = false;
    size_t beam_width = 64;
    // Exact-search effort cap; adversarial graph pairs (little node overlap,
    // divergent structure) can otherwise blow up, ged being NP-hard.
    size_t max_search_steps = 10'000'000;
};

struct GedResult {
    double cost = 0.0;
    bool exact = true;
};

namespace detail {

struct GedProblem {
    const MappingGraph& candidate;
    const MappingGraph& reference;
    const Hierarchy& hierarchy;
    const CostModel& costs;

    std::vector<size_t> cand_nodes; // non-source node ids, search order
    std::vector<size_t> ref_nodes;
    std::vector<std::vector<double>> sub; // sub[i][j]: cand_nodes[i] -> ref_nodes[j]
    std::set<std::tuple<size_t, size_t, EdgeLabel>> ref_edges;

    GedProblem(const MappingGraph& c, const MappingGraph& r, const Hierarchy& h,
               const CostModel& cm)
        : candidate(c), reference(r), hierarchy(h), costs(cm) {
        for (size_t i = 1; i < c.nodes.size(); ++i) cand_nodes.push_back(i);
        for (size_t j = 1; j < r.nodes.size(); ++j) ref_nodes.push_back(j);

        // Higher-degree candidates first tightens the bound early.
        std::vector<size_t> degree(c.nodes.size(), 0);
        for (const auto& e : c.edges) {
            ++degree[e.from];
            ++degree[e.to];
        }
        std::stable_sort(cand_nodes.begin(), cand_nodes.end(),
                         [&](size_t a, size_t b) { return degree[a] > degree[b]; });

        sub.assign(cand_nodes.size(), std::vector<double>(ref_nodes.size(), 0.0));
        for (size_t i = 0; i < cand_nodes.size(); ++i) {
            for (size_t j = 0; j < ref_nodes.size(); ++j) {
                sub[i][j] = node_substitution_cost(c.nodes[cand_nodes[i]], r.nodes[ref_nodes[j]],
                                                   h, cm);
            }
        }
        for (const auto& e : r.edges) ref_edges.insert({e.from, e.to, e.label});
    }

    /// Full cost of a complete assignment. `map_to_ref[i]` points into
    /// ref_nodes, or npos for deletion.
    [[nodiscard]] double assignment_cost(const std::vector<size_t>& map_to_ref) const {
        constexpr size_t npos = static_cast<size_t>(-1);
        double cost = 0.0;
        std::vector<bool> ref_used(ref_nodes.size(), false);
        std::vector<size_t> node_map(candidate.nodes.size(), npos);
        node_map[0] = 0;
        for (size_t i = 0; i < cand_nodes.size(); ++i) {
            if (map_to_ref[i] == npos) {
                cost += costs.node_delete;
            } else {
                cost += sub[i][map_to_ref[i]];
                ref_used[map_to_ref[i]] = true;
                node_map[cand_nodes[i]] = ref_nodes[map_to_ref[i]];
            }
        }
        for (size_t j = 0; j < ref_nodes.size(); ++j) {
            if (!ref_used[j]) cost += costs.node_insert;
        }
        size_t matched = 0;
        for (const auto& e : candidate.edges) {
            size_t from = node_map[e.from];
            size_t to = node_map[e.to];
            if (from == npos || to == npos) continue;
            if (ref_edges.count({from, to, e.label}) > 0) ++matched;
        }
        cost += costs.edge_insert_delete *
                static_cast<double>(candidate.edges.size() + reference.edges.size() -
                                    2 * matched);
        return cost;
    }
};

/// Depth-first branch and bound over injective partial assignments. Every
/// edge is priced exactly once, when its later endpoint is decided, so the
/// path cost stays exact and the bound prunes early.
class GedSearch {
  public:
    GedSearch(const GedProblem& problem, size_t max_steps)
        : p_(problem), steps_left_(max_steps) {
        prepare();
    }

    /// Exact minimum, or nullopt when the step budget ran out.
    std::optional<double> run() {
        const size_t n = p_.cand_nodes.size();
        const size_t m = p_.ref_nodes.size();
        ref_used_.assign(p_.reference.nodes.size(), false);
        ref_used_[0] = true;
        ref_to_cand_.assign(p_.reference.nodes.size(), 0);
        cand_to_ref_.assign(p_.candidate.nodes.size(), npos);
        cand_to_ref_[0] = 0;

        // Greedy upper bound primes the pruning.
        std::vector<size_t> greedy(n, npos);
        std::vector<bool> used(m, false);
        for (size_t i = 0; i < n; ++i) {
            double best_cost = p_.costs.node_delete;
            size_t best_j = npos;
            for (size_t j = 0; j < m; ++j) {
                if (!used[j] && p_.sub[i][j] < best_cost) {
                    best_cost = p_.sub[i][j];
                    best_j = j;
                }
            }
            greedy[i] = best_j;
            if (best_j != npos) used[best_j] = true;
        }
        best_ = p_.assignment_cost(greedy);

        dfs(0, 0.0);
        if (exhausted_) return std::nullopt;
        return best_;
    }

  private:
    static constexpr size_t npos = static_cast<size_t>(-1);

    struct IncidentEdge {
        size_t other;     // graph node id of the earlier endpoint
        size_t other_pos; // its search position + 1; 0 for the source
        EdgeLabel label;
        bool outgoing;    // edge points from this node to `other`'s side
    };

    void prepare() {
        // Position of each candidate node in the search order; source = 0.
        std::vector<size_t> position(p_.candidate.nodes.size(), 0);
        for (size_t i = 0; i < p_.cand_nodes.size(); ++i) position[p_.cand_nodes[i]] = i + 1;

        cand_prior_.assign(p_.cand_nodes.size(), {});
        for (const auto& e : p_.candidate.edges) {
            size_t pf = position[e.from];
            size_t pt = position[e.to];
            size_t later = std::max(pf, pt);
            if (later == 0) continue; // both endpoints are the source
            size_t other = pf > pt ? e.to : e.from;
            cand_prior_[later - 1].push_back({other, std::min(pf, pt), e.label, pf >= pt});
        }

        ref_incident_.assign(p_.reference.nodes.size(), {});
        for (const auto& e : p_.reference.edges) {
            if (e.from != 0) ref_incident_[e.from].push_back({e.to, 0, e.label, true});
            if (e.to != 0 && e.to != e.from) {
                ref_incident_[e.to].push_back({e.from, 0, e.label, false});
            }
        }

        for (const auto& e : p_.candidate.edges) cand_edges_.insert({e.from, e.to, e.label});

        // Per level: how many candidate edges still have both endpoints
        // undecided, split by label. Feeds the future-edge floor.
        size_t levels = p_.cand_nodes.size() + 1;
        cand_future_by_label_.assign(levels, {0, 0, 0, 0});
        for (const auto& e : p_.candidate.edges) {
            size_t early = std::min(position[e.from], position[e.to]);
            for (size_t next = 0; next < levels && next < early; ++next) {
                ++cand_future_by_label_[next][static_cast<size_t>(e.label)];
            }
        }
    }

    /// Floor on edits among edges whose endpoints are all still undecided:
    /// a candidate edge can only ever match a reference edge with the same
    /// label, so per-label count differences are unavoidable.
    double future_edge_floor(size_t next) const {
        std::array<int, 4> ref_free = {0, 0, 0, 0};
        for (const auto& e : p_.reference.edges) {
            bool from_free = e.from != 0 && !ref_used_[e.from];
            bool to_free = e.to != 0 && !ref_used_[e.to];
            if (from_free && to_free) ++ref_free[static_cast<size_t>(e.label)];
        }
        double floor = 0.0;
        for (size_t l = 0; l < 4; ++l) {
            floor += p_.costs.edge_insert_delete *
                     std::abs(cand_future_by_label_[next][l] - ref_free[l]);
        }
        return floor;
    }

    /// Edge cost decided by assigning candidate position i to reference node
    /// rj (a graph node id), given the earlier decisions.
    double assign_edge_cost(size_t i, size_t rj) const {
        double cost = 0.0;
        size_t ci = p_.cand_nodes[i];
        for (const auto& e : cand_prior_[i]) {
            size_t other_ref = cand_to_ref_[e.other];
            if (other_ref == npos) {
                cost += p_.costs.edge_insert_delete; // endpoint deleted
                continue;
            }
            size_t from = e.outgoing ? rj : other_ref;
            size_t to = e.outgoing ? other_ref : rj;
            if (p_.ref_edges.count({from, to, e.label}) == 0) {
                cost += p_.costs.edge_insert_delete;
            }
        }
        for (const auto& e : ref_incident_[rj]) {
            if (!ref_used_[e.other]) continue; // undecided; priced later or at the leaf
            size_t other_cand = ref_to_cand_[e.other];
            size_t from = e.outgoing ? ci : other_cand;
            size_t to = e.outgoing ? other_cand : ci;
            if (cand_edges_.count({from, to, e.label}) == 0) {
                cost += p_.costs.edge_insert_delete;
            }
        }
        return cost;
    }

    [[nodiscard]] double delete_edge_cost(size_t i) const {
        return p_.costs.edge_insert_delete * static_cast<double>(cand_prior_[i].size());
    }

    /// Remaining-cost bound: for each undecided candidate, the cheapest of
    /// deleting it or mapping it to any free reference node, including the
    /// mismatch cost its already-decided edges would incur. Edges between two
    /// undecided nodes may still all match and contribute nothing.
    double lower_bound(size_t next, double cost_so_far, double prune_at) const {
        double bound = cost_so_far + future_edge_floor(next);
        size_t free_refs = 0;
        for (size_t j = 0; j < p_.ref_nodes.size(); ++j) {
            if (!ref_used_[p_.ref_nodes[j]]) ++free_refs;
        }
        size_t remaining = p_.cand_nodes.size() - next;
        if (free_refs > remaining) {
            bound += p_.costs.node_insert * static_cast<double>(free_refs - remaining);
        }
        if (bound >= prune_at) return bound;
        for (size_t i = next; i < p_.cand_nodes.size(); ++i) {
            size_t decided_edges = 0;
            for (const auto& e : cand_prior_[i]) {
                if (e.other_pos <= next) ++decided_edges;
            }
            double best =
                p_.costs.node_delete + p_.costs.edge_insert_delete * decided_edges;
            for (size_t j = 0; j < p_.ref_nodes.size() && best > 0.0; ++j) {
                size_t rj = p_.ref_nodes[j];
                if (ref_used_[rj]) continue;
                double c = p_.sub[i][j];
                if (c >= best) continue;
                for (const auto& e : cand_prior_[i]) {
                    if (e.other_pos > next) continue; // not decided yet
                    size_t other_ref = cand_to_ref_[e.other];
                    if (other_ref == npos) {
                        c += p_.costs.edge_insert_delete;
                    } else {
                        size_t from = e.outgoing ? rj : other_ref;
                        size_t to = e.outgoing ? other_ref : rj;
                        if (p_.ref_edges.count({from, to, e.label}) == 0) {
                            c += p_.costs.edge_insert_delete;
                        }
                    }
                    if (c >= best) break;
                }
                if (c < best) best = c;
            }
            bound += best;
            if (bound >= prune_at) return bound;
        }
        return bound;
    }

    [[nodiscard]] double leaf_cost() const {
        double cost = 0.0;
        for (size_t j = 0; j < p_.ref_nodes.size(); ++j) {
            if (!ref_used_[p_.ref_nodes[j]]) cost += p_.costs.node_insert;
        }
        for (const auto& e : p_.reference.edges) {
            if (!ref_used_[e.from] || !ref_used_[e.to]) {
                cost += p_.costs.edge_insert_delete;
            }
        }
        return cost;
    }

    void dfs(size_t i, double cost_so_far) {
        if (steps_left_ == 0) {
            exhausted_ = true;
            return;
        }
        --steps_left_;
        if (lower_bound(i, cost_so_far, best_) >= best_) return;
        if (i == p_.cand_nodes.size()) {
            double total = cost_so_far + leaf_cost();
            if (total < best_) best_ = total;
            return;
        }
        size_t ci = p_.cand_nodes[i];

        // Cheapest steps first; the first descent doubles as an edge-aware
        // greedy solution that tightens the pruning threshold early.
        struct Branch {
            double step;
            size_t j; // npos = delete
        };
        std::vector<Branch> branches;
        branches.reserve(p_.ref_nodes.size() + 1);
        for (size_t j = 0; j < p_.ref_nodes.size(); ++j) {
            size_t rj = p_.ref_nodes[j];
            if (ref_used_[rj]) continue;
            branches.push_back({p_.sub[i][j] + assign_edge_cost(i, rj), j});
        }
        branches.push_back({p_.costs.node_delete + delete_edge_cost(i), npos});
        std::sort(branches.begin(), branches.end(),
                  [](const Branch& a, const Branch& b) { return a.step < b.step; });

        for (const auto& branch : branches) {
            if (cost_so_far + branch.step >= best_) break; // sorted: no better branch follows
            if (branch.j == npos) {
                dfs(i + 1, cost_so_far + branch.step);
                continue;
            }
            size_t rj = p_.ref_nodes[branch.j];
            ref_used_[rj] = true;
            ref_to_cand_[rj] = ci;
            cand_to_ref_[ci] = rj;
            dfs(i + 1, cost_so_far + branch.step);
            ref_used_[rj] = false;
            cand_to_ref_[ci] = npos;
        }
    }

    const GedProblem& p_;
    std::vector<bool> ref_used_;          // by reference graph node id
    std::vector<size_t> ref_to_cand_;     // ref node id -> candidate node id
    std::vector<size_t> cand_to_ref_;     // candidate node id -> ref node id
    std::vector<std::vector<IncidentEdge>> cand_prior_; // per search position
    std::vector<std::vector<IncidentEdge>> ref_incident_; // per ref node id
    std::set<std::tuple<size_t, size_t, EdgeLabel>> cand_edges_;
    std::vector<std::array<int, 4>> cand_future_by_label_; // per level
    double best_ = std::numeric_limits<double>::infinity();
    size_t steps_left_;
    bool exhausted_ = false;
};

/// Beam over partial assignments; not exact, used only when allowed.
inline double ged_beam(const GedProblem& p, size_t beam_width) {
    constexpr size_t npos = static_cast<size_t>(-1);
    struct State {
        std::vector<size_t> assignment;
        std::vector<bool> ref_used;
        double node_cost;
    };
    std::vector<State> beam = {
        {{}, std::vector<bool>(p.ref_nodes.size(), false), 0.0}};
    for (size_t i = 0; i < p.cand_nodes.size(); ++i) {
        std::vector<State> next;
        for (const auto& state : beam) {
            for (size_t j = 0; j <= p.ref_nodes.size(); ++j) {
                bool del = j == p.ref_nodes.size();
                if (!del && state.ref_used[j]) continue;
                State s = state;
                s.assignment.push_back(del ? npos : j);
                if (!del) {
                    s.ref_used[j] = true;
                    s.node_cost += p.sub[i][j];
                } else {
                    s.node_cost += p.costs.node_delete;
                }
                next.push_back(std::move(s));
            }
        }
        std::sort(next.begin(), next.end(),
                  [](const State& a, const State& b) { return a.node_cost < b.node_cost; });
        if (next.size() > beam_width) next.resize(beam_width);
        beam = std::move(next);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& state : beam) best = std::min(best, p.assignment_cost(state.assignment));
    return best;
}

} // namespace detail

/// Exact minimum edit cost between two mapping graphs with the source nodes
/// pinned to each other. Falls back to a beam search (flagged non-exact) when
/// the graphs exceed the exactness bound and approximation is allowed.
inline GedResult ged(const MappingGraph& candidate, const MappingGraph& reference,
                     const Hierarchy& hierarchy, const CostModel& costs,
                     const GedOptions& options = {}) {
    if (candidate.nodes.empty() || reference.nodes.empty()) {
        throw EvalError("ged requires non-empty graphs");
    }
    detail::GedProblem problem(candidate, reference, hierarchy, costs);
    size_t largest = std::max(problem.cand_nodes.size(), problem.ref_nodes.size());
    if (largest > options.exact_node_limit) {
        if (!options.allow_approximate) {
            throw EvalError("graphs with " + std::to_string(largest) +
                            " non-source nodes exceed the exact bound of " +
                            std::to_string(options.exact_node_limit) +
                            "; enable the approximate fallback (--approx-ged)");
        }
        return {detail::ged_beam(problem, options.beam_width), false};
    }
    auto exact = detail::GedSearch(problem, options.max_search_steps).run();
    if (!exact.has_value()) {
        if (!options.allow_approximate) {
            throw EvalError("exact search exceeded " +
                            std::to_string(options.max_search_steps) +
                            " steps on this graph pair; enable the approximate fallback "
                            "(--approx-ged)");
        }
        return {detail::ged_beam(problem, options.beam_width), false};
    }
    return {*exact, true};
}

/// Worst-case edit distance used to normalize scores: edge cost times the
/// larger edge count, plus each reference node's sigma, plus insertions for
/// candidate surplus nodes. Source nodes do not count.
inline double max_ged(const MappingGraph& candidate, const MappingGraph& reference,
                      const CostModel& costs) {
    double edge_term = costs.edge_insert_delete *
                       static_cast<double>(std::max(candidate.edges.size(), reference.edges.size()));
    double node_term = 0.0;
    for (size_t j = 1; j < reference.nodes.size(); ++j) {
        node_term += costs.sigma(reference.nodes[j].kind);
    }
    double total = edge_term + node_term;
    auto vc = static_cast<long long>(candidate.non_source_count());
    auto vr = static_cast<long long>(reference.non_source_count());
    if (vc > vr) total += costs.node_insert * static_cast<double>(vc - vr);
    return total;
}

struct MappingScore {
    double ged = 0.0;
    double max_ged = 0.0;
    double score = 0.0;
    bool exact = true;
};

/// s = 1 - GED/max_GED, clamped to [0,1].
inline MappingScore mapping_score(const MappingGraph& candidate, const MappingGraph& reference,
                                  const Hierarchy& hierarchy, const CostModel& costs,
                                  const GedOptions& options = {}) {
    MappingScore result;
    GedResult distance = ged(candidate, reference, hierarchy, costs, options);
    result.ged = distance.cost;
    result.exact = distance.exact;
    result.max_ged = max_ged(candidate, reference, costs);
    if (result.max_ged <= 0.0) {
        result.score = result.ged == 0.0 ? 1.0 : 0.0;
        return result;
    }
    result.score = std::clamp(1.0 - result.ged / result.max_ged, 0.0, 1.0);
    return result;
}

struct EvaluationRow {
    std::string source_iri;
    bool valid = false;
    double score = 0.0;
    std::optional<double> class_precision;
    std::optional<double> class_recall;
    std::string notes;
};

struct EvaluationReport {
    std::vector<EvaluationRow> rows;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double class_precision = 0.0;
    double class_recall = 0.0;
    double class_f1 = 0.0;
    size_t valid_count = 0;     // |M_c|
    size_t reference_count = 0; // |M_r|
    bool precision_undefined = false;

    void finalize(size_t m_r) {
        reference_count = m_r;
        valid_count = 0;
        double score_sum = 0.0;
        double cp_sum = 0.0, cr_sum = 0.0;
        size_t class_rows = 0;
        for (const auto& row : rows) {
            if (!row.valid) continue;
            ++valid_count;
            score_sum += row.score;
            if (row.class_precision.has_value()) {
                cp_sum += *row.class_precision;
                cr_sum += *row.class_recall;
                ++class_rows;
            }
        }
        if (valid_count == 0) {
            precision = 0.0;
            precision_undefined = true;
        } else {
            precision = score_sum / static_cast<double>(valid_count);
        }
        recall = m_r == 0 ? 0.0 : score_sum / static_cast<double>(m_r);
        f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        if (class_rows > 0) {
            class_precision = cp_sum / static_cast<double>(class_rows);
            class_recall = cr_sum / static_cast<double>(class_rows);
            class_f1 = class_precision + class_recall > 0.0
                           ? 2.0 * class_precision * class_recall /
                                 (class_precision + class_recall)
                           : 0.0;
        }
    }
};

struct ScoredMapping {
    Iri source;
    std::optional<ComplexMapping> generated; // absent = invalid output
    ComplexMapping reference;
    std::string note;

    ScoredMapping(Iri src, std::optional<ComplexMapping> gen, ComplexMapping ref,
                  std::string n = {})
        : source(std::move(src)), generated(std::move(gen)), reference(std::move(ref)),
          note(std::move(n)) {}
};

/// Alignment-level precision/recall/F1: valid mappings' scores over |M_c| and
/// |M_r|; class-based aggregates averaged over the valid rows.
inline EvaluationReport alignment_metrics(std::span<const ScoredMapping> results,
                                          const Hierarchy& hierarchy, const CostModel& costs,
                                          size_t reference_count, const GedOptions& options = {}) {
    EvaluationReport report;
    for (const auto& item : results) {
        EvaluationRow row;
        row.source_iri = item.source.value();
        row.notes = item.note;
        if (item.generated.has_value()) {
            row.valid = true;
            MappingGraph candidate = to_graph(*item.generated);
            MappingGraph reference = to_graph(item.reference);
            MappingScore score = mapping_score(candidate, reference, hierarchy, costs, options);
            row.score = score.score;
            if (!score.exact) {
                row.notes += row.notes.empty() ? "approximate ged" : "; approximate ged";
            }
            auto predicted = item.generated->expression.named_class_iris();
            auto expected = item.reference.expression.named_class_iris();
            ClassSetScores cls = class_set_scores(predicted, expected, hierarchy);
            row.class_precision = cls.precision;
            row.class_recall = cls.recall;
        }
        report.rows.push_back(std::move(row));
    }
    report.finalize(reference_count);
    return report;
}

/// Tab-separated report: one row per mapping.
inline std::string report_to_tsv(const EvaluationReport& report) {
    std::string out = "source_iri\tvalid\ts\tclass_prec\tclass_rec\tnotes\n";
    auto fmt = [](double v) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.6f", v);
        return std::string(buffer);
    };
    for (const auto& row : report.rows) {
        out += row.source_iri + '\t' + (row.valid ? "true" : "false") + '\t' + fmt(row.score) +
               '\t' + (row.class_precision ? fmt(*row.class_precision) : "-") + '\t' +
               (row.class_recall ? fmt(*row.class_recall) : "-") + '\t' + row.notes + '\n';
    }
    return out;
}

inline nlohmann::json summary_to_json(const EvaluationReport& report, const std::string& task,
                                      const std::string& variant) {
    return {{"task", task},
            {"variant", variant},
            {"P", report.precision},
            {"R", report.recall},
            {"F1", report.f1},
            {"class_P", report.class_precision},
            {"class_R", report.class_recall},
            {"class_F1", report.class_f1},
            {"m_c", report.valid_count},
            {"m_r", report.reference_count},
            {"precision_undefined", report.precision_undefined}};
}

} // namespace cmom
