#pragma once

#include "rtt/tiling.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rtt {

/// Disjoint nonempty parts covering every vertex of one host graph.
class VertexPartition {
public:
  VertexPartition(const Graph& g, std::vector<Bits> parts);
  static VertexPartition trivial(const Graph& g);

  std::uint64_t host() const { return host_; }
  std::size_t order() const { return owner_.size(); }
  std::size_t size() const { return parts_.size(); }
  const Bits& part(std::size_t i) const { return parts_[i]; }
  const std::vector<Bits>& parts() const { return parts_; }
  std::size_t part_of(Vertex v) const { return owner_[v]; }

private:
  std::uint64_t host_ = 0;
  std::vector<Bits> parts_;
  std::vector<std::size_t> owner_;
};

using IndexVector = std::vector<std::size_t>;

IndexVector index_vector(const VertexPartition& p, const VertexSet& s);
IndexVector index_vector(const VertexPartition& p, const std::vector<Vertex>& s);
std::string format_vector(const IndexVector& v);

/// Maximal greedy fan at v: disjoint (k-1)-sets inside u, each spanning F with v.
std::vector<std::vector<Vertex>> build_fan(const Graph& g, const Pattern& f, Vertex v, const Bits& u);
std::vector<std::vector<Vertex>> build_fan(const Graph& g, const Pattern& f, Vertex v, const VertexSet& u);

/// Whether G[s ∪ {x}] has an F-factor, for a connector s and endpoint x.
bool is_connector(const Graph& g, const Pattern& f, Vertex u, Vertex v, const std::vector<Vertex>& s,
                  std::size_t t);

/// Pairwise-disjoint u–v connectors; re-verified on construction.
class ReachabilityCertificate {
public:
  static ReachabilityCertificate make(const Graph& g, const Pattern& f, Vertex u, Vertex v, std::size_t t,
                                      std::vector<std::vector<Vertex>> connectors);

  Vertex u() const { return u_; }
  Vertex v() const { return v_; }
  std::size_t t() const { return t_; }
  std::uint64_t host() const { return host_; }
  const std::vector<std::vector<Vertex>>& connectors() const { return connectors_; }
  std::size_t strength() const { return connectors_.size(); }
  /// A connector disjoint from w, if any.
  std::optional<std::vector<Vertex>> avoiding(const Bits& w) const;

private:
  ReachabilityCertificate() = default;
  Vertex u_ = 0, v_ = 0;
  std::size_t t_ = 1;
  std::uint64_t host_ = 0;
  std::vector<std::vector<Vertex>> connectors_;
};

/// Greedily collects disjoint connectors of size k-1 (common-neighbourhood
/// copies), then, when t >= 2, of size 2k-1 chained through a middle vertex.
ReachabilityCertificate find_disjoint_connectors(const Graph& g, const Pattern& f, Vertex u, Vertex v,
                                                 std::size_t t, std::size_t target,
                                                 const std::optional<Bits>& forbidden = std::nullopt);

/// u–w certificate from u–v and v–w certificates: each output connector is
/// S1 ∪ {x} ∪ S2 for a middle x that completes both S1 and S2 (v first).
ReachabilityCertificate concatenate_reachability(const Graph& g, const Pattern& f,
                                                 const ReachabilityCertificate& uv,
                                                 const ReachabilityCertificate& vw);

/// Pairwise-disjoint copies of F sharing one index vector.
class RobustnessCertificate {
public:
  static RobustnessCertificate make(const Graph& g, const Pattern& f, const VertexPartition& p,
                                    IndexVector vector, std::vector<PatternCopy> copies);
  const IndexVector& vector() const { return vector_; }
  const std::vector<PatternCopy>& copies() const { return copies_; }
  std::size_t strength() const { return copies_.size(); }
  std::optional<PatternCopy> avoiding(const Bits& w) const;

private:
  RobustnessCertificate() = default;
  IndexVector vector_;
  std::vector<PatternCopy> copies_;
};

RobustnessCertificate robust_vector_certificate(const Graph& g, const Pattern& f, const VertexPartition& p,
                                                const IndexVector& vec, std::size_t target,
                                                std::uint64_t budget = default_node_budget);

/// Whether both G[a] and G[a ∪ s] have F-factors.
Verdict verify_absorber(const Graph& g, const Pattern& f, const std::vector<Vertex>& s,
                        const std::vector<Vertex>& a, std::size_t t,
                        std::uint64_t budget = default_node_budget);

/// Absorbers for s built as a twin copy T with i_P(T) = i_P(s) plus one
/// connector per matched pair (s_i, t_i); each is verified before it is kept.
std::vector<std::vector<Vertex>> find_disjoint_absorbers(const Graph& g, const Pattern& f,
                                                         const VertexPartition& p,
                                                         const std::vector<Vertex>& s, std::size_t t,
                                                         std::size_t target);

// --- templates -----------------------------------------------------------------

struct Template {
  std::size_t m = 0;
  Rational beta;
  std::size_t x = 0, y = 0, z = 0;  ///< left side is X then Y; right side is Z
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t max_degree = 0;
  bool verified = false;
  bool exhaustive = false;
  std::size_t subsets_checked = 0;
  std::size_t attempts = 0;

  std::size_t left() const { return x + y; }
};

class ConstructionFailure : public Error {
public:
  using Error::Error;
};

struct TemplateCheck {
  std::size_t checked = 0;
  std::size_t perfect = 0;
  bool exhaustive = false;
  std::vector<std::size_t> failing_subset;
};

/// Matches X' ∪ Y onto Z for every m-subset X' (or `samples` random ones when
/// there are more than that).
TemplateCheck check_template(const Template& t, std::size_t samples = 2000, std::uint64_t seed = 0);

Template montgomery_template(std::size_t m, const Rational& beta, std::uint64_t seed,
                             std::size_t retries = 200);

// --- absorbing sets -------------------------------------------------------------

class StageError : public Error {
public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage(std::move(stage)) {}
  std::string stage;
};

struct AbsorbingParams {
  Bits scope;
  Rational gamma{1};
  std::size_t m = 2;
  Rational beta{3, 2};
  std::size_t t = 1;
  std::size_t min_fan = 2;
  std::uint64_t seed = 0;
  std::size_t retries = 200;
};

struct AbsorbingSet {
  std::uint64_t host = 0;
  Bits vertices;
  Bits scope;
  /// Largest |U| the template construction is designed to absorb.
  std::size_t capacity = 0;
  Rational xi;
  std::string pattern;
  nlohmann::json ledger;
};

AbsorbingSet build_absorbing_set(const Graph& g, const Pattern& f, const AbsorbingParams& params);

struct AbsorptionCheck {
  Verdict verdict = Verdict::yes;
  std::size_t checked = 0;
  std::vector<Vertex> failing;
};

/// Every U ⊆ scope \ A with |U| <= max_u and k | |A| + |U| must leave G[A ∪ U]
/// with an F-factor.
AbsorptionCheck verify_absorbing_set(const Graph& g, const Pattern& f, const Bits& a, const Bits& scope,
                                     std::size_t max_u, std::uint64_t budget = default_node_budget);

/// Re-checks a ledger offline: template, disjointness and every absorber.
bool reverify_ledger(const Graph& g, const Pattern& f, const nlohmann::json& ledger);

// --- partitions -----------------------------------------------------------------

struct MergeEvent {
  std::size_t i = 0, j = 0;
  IndexVector s, t;
  std::size_t strength_s = 0, strength_t = 0;
  std::size_t parts_before = 0;
};

struct MergeResult {
  VertexPartition partition;
  std::vector<MergeEvent> log;
};

/// Merges parts i, j whenever robust k-vectors s, t with s - t = u_i - u_j
/// exist, until no transferral remains.
MergeResult merge_partition(const Graph& g, const Pattern& f, const VertexPartition& p, std::size_t t,
                            std::size_t strength_threshold, std::uint64_t budget = default_node_budget);

struct InitialPartition {
  VertexPartition partition;
  std::size_t threshold = 0;
  std::size_t sampled_pairs = 0;
  /// Certificates of the sampled pairs that lie inside one part.
  std::vector<ReachabilityCertificate> within{};
  /// Sampled pairs inside one part whose own certificate is below threshold.
  std::size_t weak_within = 0;
  std::string method = "sampled-reachability-components (heuristic)";
};

/// Parts are components of the relation "sampled pair has a certificate of
/// strength >= max(2, floor(delta n))".
InitialPartition initial_partition(const Graph& g, const Pattern& f, const Rational& delta, std::size_t t,
                                   std::size_t sample_budget, std::uint64_t seed = 0);

}  // namespace rtt
