#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "kgef/graph.hpp"

namespace kgef {

enum class Model { TransE, TransR, DistMult, RESCAL };

inline constexpr Model kAllModels[] = {Model::TransE, Model::TransR, Model::DistMult, Model::RESCAL};

std::string_view to_string(Model model);
std::optional<Model> parse_model(std::string_view text);  // case-insensitive

inline bool is_translational(Model m) { return m == Model::TransE || m == Model::TransR; }
inline bool has_relation_matrices(Model m) { return m == Model::TransR || m == Model::RESCAL; }

using Rng = std::mt19937_64;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct IndexedTriple {
  int head = 0;
  int relation = 0;
  int tail = 0;

  auto operator<=>(const IndexedTriple&) const = default;
};

/// Integer-indexed view of a graph for training. Literal objects become
/// nodes labelled with their quoted value, so every statement is usable.
struct KgDataset {
  std::vector<std::string> entity_labels;    // sorted; index = entity id
  std::vector<std::string> relation_labels;  // vocabulary order
  std::vector<IndexedTriple> triples;        // sorted, unique

  /// `relations` restricts the statements used; empty means all.
  static KgDataset from_graph(const Graph& graph, const std::set<Relation>& relations = {});

  std::optional<int> find_entity(std::string_view label) const;
  int num_entities() const { return static_cast<int>(entity_labels.size()); }
  int num_relations() const { return static_cast<int>(relation_labels.size()); }
};

/// Membership test over known triples plus the known tails of each (h, r).
class TripleFilter {
 public:
  explicit TripleFilter(std::span<const IndexedTriple> triples);

  bool contains(const IndexedTriple& t) const;
  std::span<const int> tails(int head, int relation) const;

 private:
  static std::uint64_t key(int head, int relation) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(head)) << 32) |
           static_cast<std::uint32_t>(relation);
  }
  std::unordered_map<std::uint64_t, std::vector<int>> tails_;
};

struct ModelParams {
  Model model = Model::TransE;
  int dim = 64;
  std::uint64_t seed = 0;
  Matrix entity_vecs;                         // |E| x d
  Matrix relation_vecs;                       // |R| x d
  std::vector<Eigen::MatrixXd> relation_mats;  // |R| of d x d for TransR (projection) and RESCAL (bilinear)

  bool all_finite() const;
  bool operator==(const ModelParams& other) const;
};

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 0.01;
  double margin = 1.0;
  int negatives = 1;
  int batch_size = 32;
  std::uint64_t seed = 42;
  double regularization = 1e-3;
  int dim = 64;

  /// Throws Error unless every field is positive (epochs may be zero).
  void validate() const;
};

/// Xavier-uniform initialization; translational models start with unit-norm
/// entity and relation vectors.
ModelParams init_params(Model model, int num_entities, int num_relations, int dim, Rng& rng);
ModelParams init_params(Model model, int num_entities, int num_relations, int dim, std::uint64_t seed);

/// Higher is better for every model:
///   TransE   -||h + r - t||
///   TransR   -||M_r h + r - M_r t||
///   DistMult sum_i h_i r_i t_i
///   RESCAL   h^T M_r t
double score(Model model, const Vector& h, const Vector& r, const Vector& t, const Eigen::MatrixXd* relation_mat);
double score(const ModelParams& params, int head, int relation, int tail);
double score(const ModelParams& params, const IndexedTriple& triple);

/// Corrupts head or tail (fair coin per draw) with a uniform entity until the
/// result is not a known triple. Returns nullopt after `max_draws` failures.
std::optional<IndexedTriple> negative_sample(const IndexedTriple& positive, int num_entities,
                                             const TripleFilter& known, Rng& rng, int max_draws = 64);

/// Sparse parameter gradient keyed by row (or relation for matrices).
struct Gradient {
  std::map<int, Vector> entity;
  std::map<int, Vector> relation;
  std::map<int, Eigen::MatrixXd> matrix;

  bool all_finite() const;
};

/// Loss of one positive against its negatives. Translational models use the
/// margin ranking loss sum_n max(0, margin - s(pos) + s(neg)); bilinear
/// models use softplus(-s(pos)) + sum_n softplus(s(neg)) plus an L2 penalty
/// regularization * (|h|^2 + |r|^2 + |t|^2 [+ |M_r|_F^2]) on every triple
/// involved. When `grad` is given the loss gradient is added to it.
double example_loss(const ModelParams& params, const IndexedTriple& positive,
                    std::span<const IndexedTriple> negatives, const TrainConfig& config, Gradient* grad);

struct GradientCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;  // scalar parameters compared
  bool excluded = false;    // evaluated at a non-differentiable point
  std::string note;
};

/// Central finite differences over every parameter touched by the example.
/// Relative error per scalar is |a - n| / max(|a|, |n|, 1e-7). Points within
/// 1e-4 of a kink (zero translation distance or an active-margin boundary)
/// are reported as excluded.
GradientCheckResult gradient_check(const ModelParams& params, const IndexedTriple& positive,
                                   std::span<const IndexedTriple> negatives, const TrainConfig& config,
                                   double step = 1e-5);

struct TrainResult {
  ModelParams params;
  std::vector<double> epoch_loss;  // mean loss per positive
};

/// Mini-batch SGD. Deterministic given the dataset and config.seed.
/// Throws Error naming epoch and batch if a gradient is not finite.
TrainResult train(Model model, const KgDataset& data, const TrainConfig& config);

struct LinkPredictionMetrics {
  double mrr = 0.0;
  double hits_at_1 = 0.0;
  double hits_at_3 = 0.0;
  double hits_at_10 = 0.0;
  std::size_t count = 0;
};

/// Filtered tail ranking: other known tails of (h, r) are removed from the
/// candidates. Ties count half (mean of optimistic and pessimistic rank).
LinkPredictionMetrics evaluate_link_prediction(const ModelParams& params, std::span<const IndexedTriple> test,
                                               std::span<const IndexedTriple> all_triples);

/// Expected filtered MRR of a uniformly random ranking: mean of H(n)/n where
/// n is the filtered candidate count of each test triple.
double uniform_random_mrr(std::span<const IndexedTriple> test, std::span<const IndexedTriple> all_triples,
                          int num_entities);

void save_params(const ModelParams& params, std::ostream& out);
ModelParams load_params(std::istream& in);
void save_params(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_params(const std::filesystem::path& path);

/// `index \t label` lines.
void write_labels(std::ostream& out, std::span<const std::string> labels);
std::vector<std::string> read_labels(std::istream& in);

}  // namespace kgef
