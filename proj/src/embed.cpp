#include "kgef/embed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace kgef {

std::string_view to_string(Model model) {
  switch (model) {
    case Model::TransE: return "TransE";
    case Model::TransR: return "TransR";
    case Model::DistMult: return "DistMult";
    case Model::RESCAL: return "RESCAL";
  }
  return "?";
}

std::optional<Model> parse_model(std::string_view text) {
  const std::string lowered = lowercase_ascii(text);
  for (Model m : kAllModels) {
    if (lowercase_ascii(to_string(m)) == lowered) return m;
  }
  return std::nullopt;
}

// -- dataset ------------------------------------------------------------------

KgDataset KgDataset::from_graph(const Graph& graph, const std::set<Relation>& relations) {
  const auto wanted = [&](Relation r) { return relations.empty() || relations.count(r) > 0; };
  const auto label_of = [](const Object& o) { return o.literal ? quote_literal(o.value) : o.value; };

  KgDataset d;
  std::set<std::string> labels;
  std::set<Relation> present;
  for (const auto& t : graph.triples()) {
    if (!wanted(t.predicate)) continue;
    labels.insert(t.subject);
    labels.insert(label_of(t.object));
    present.insert(t.predicate);
  }
  d.entity_labels.assign(labels.begin(), labels.end());

  std::map<Relation, int> relation_index;
  for (Relation r : kAllRelations) {
    if (!present.count(r)) continue;
    relation_index[r] = static_cast<int>(d.relation_labels.size());
    d.relation_labels.emplace_back(to_string(r));
  }

  for (const auto& t : graph.triples()) {
    if (!wanted(t.predicate)) continue;
    d.triples.push_back({*d.find_entity(t.subject), relation_index.at(t.predicate), *d.find_entity(label_of(t.object))});
  }
  std::sort(d.triples.begin(), d.triples.end());
  d.triples.erase(std::unique(d.triples.begin(), d.triples.end()), d.triples.end());
  return d;
}

std::optional<int> KgDataset::find_entity(std::string_view label) const {
  auto it = std::lower_bound(entity_labels.begin(), entity_labels.end(), label);
  if (it == entity_labels.end() || *it != label) return std::nullopt;
  return static_cast<int>(it - entity_labels.begin());
}

TripleFilter::TripleFilter(std::span<const IndexedTriple> triples) {
  for (const auto& t : triples) tails_[key(t.head, t.relation)].push_back(t.tail);
  for (auto& [k, v] : tails_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

bool TripleFilter::contains(const IndexedTriple& t) const {
  auto it = tails_.find(key(t.head, t.relation));
  return it != tails_.end() && std::binary_search(it->second.begin(), it->second.end(), t.tail);
}

std::span<const int> TripleFilter::tails(int head, int relation) const {
  auto it = tails_.find(key(head, relation));
  if (it == tails_.end()) return {};
  return it->second;
}

// -- parameters ----------------------------------------------------------------

bool ModelParams::all_finite() const {
  if (!entity_vecs.allFinite() || !relation_vecs.allFinite()) return false;
  return std::all_of(relation_mats.begin(), relation_mats.end(), [](const auto& m) { return m.allFinite(); });
}

bool ModelParams::operator==(const ModelParams& o) const {
  if (model != o.model || dim != o.dim || seed != o.seed) return false;
  if (entity_vecs.rows() != o.entity_vecs.rows() || relation_vecs.rows() != o.relation_vecs.rows()) return false;
  if (relation_mats.size() != o.relation_mats.size()) return false;
  if (entity_vecs != o.entity_vecs || relation_vecs != o.relation_vecs) return false;
  for (std::size_t i = 0; i < relation_mats.size(); ++i) {
    if (relation_mats[i] != o.relation_mats[i]) return false;
  }
  return true;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw Error("epochs must be non-negative");
  if (!(learning_rate > 0)) throw Error("learning_rate must be positive");
  if (!(margin > 0)) throw Error("margin must be positive");
  if (negatives < 1) throw Error("negatives must be positive");
  if (batch_size < 1) throw Error("batch_size must be positive");
  if (!(regularization > 0)) throw Error("regularization must be positive");
  if (dim < 1) throw Error("dim must be positive");
}

namespace {

void normalize_rows(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double n = m.row(i).norm();
    if (n > 0) m.row(i) /= n;
  }
}

}  // namespace

ModelParams init_params(Model model, int num_entities, int num_relations, int dim, Rng& rng) {
  if (num_entities < 0 || num_relations < 0 || dim < 1) throw Error("invalid parameter shape");
  // Xavier-uniform with fan_in = fan_out = dim.
  const double bound = std::sqrt(6.0 / (2.0 * dim));
  std::uniform_real_distribution<double> uniform(-bound, bound);
  const auto fill = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform(rng);
    }
  };

  ModelParams p;
  p.model = model;
  p.dim = dim;
  p.entity_vecs.resize(num_entities, dim);
  p.relation_vecs.resize(num_relations, dim);
  fill(p.entity_vecs);
  fill(p.relation_vecs);
  if (has_relation_matrices(model)) {
    p.relation_mats.assign(num_relations, Eigen::MatrixXd(dim, dim));
    for (auto& m : p.relation_mats) fill(m);
  }
  if (is_translational(model)) {
    normalize_rows(p.entity_vecs);
    normalize_rows(p.relation_vecs);
  }
  return p;
}

ModelParams init_params(Model model, int num_entities, int num_relations, int dim, std::uint64_t seed) {
  Rng rng(seed);
  ModelParams p = init_params(model, num_entities, num_relations, dim, rng);
  p.seed = seed;
  return p;
}

// -- scoring -------------------------------------------------------------------

double score(Model model, const Vector& h, const Vector& r, const Vector& t, const Eigen::MatrixXd* m) {
  switch (model) {
    case Model::TransE: return -(h + r - t).norm();
    case Model::TransR:
      if (!m) throw Error("TransR needs a projection matrix");
      return -(*m * (h - t) + r).norm();
    case Model::DistMult: return (h.array() * r.array() * t.array()).sum();
    case Model::RESCAL:
      if (!m) throw Error("RESCAL needs a relation matrix");
      return h.dot(*m * t);
  }
  return 0.0;
}

double score(const ModelParams& p, int head, int relation, int tail) {
  const Vector h = p.entity_vecs.row(head).transpose();
  const Vector r = p.relation_vecs.row(relation).transpose();
  const Vector t = p.entity_vecs.row(tail).transpose();
  const Eigen::MatrixXd* m = p.relation_mats.empty() ? nullptr : &p.relation_mats[relation];
  return score(p.model, h, r, t, m);
}

double score(const ModelParams& p, const IndexedTriple& x) { return score(p, x.head, x.relation, x.tail); }

std::optional<IndexedTriple> negative_sample(const IndexedTriple& positive, int num_entities,
                                             const TripleFilter& known, Rng& rng, int max_draws) {
  if (num_entities < 2) return std::nullopt;
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> pick(0, num_entities - 1);
  for (int draw = 0; draw < max_draws; ++draw) {
    IndexedTriple candidate = positive;
    const bool corrupt_head = coin(rng);
    (corrupt_head ? candidate.head : candidate.tail) = pick(rng);
    if (!known.contains(candidate) && candidate != positive) return candidate;
  }
  return std::nullopt;
}

// -- loss and gradients --------------------------------------------------------

bool Gradient::all_finite() const {
  const auto finite = [](const auto& m) {
    return std::all_of(m.begin(), m.end(), [](const auto& kv) { return kv.second.allFinite(); });
  };
  return finite(entity) && finite(relation) && finite(matrix);
}

namespace {

template <typename Map, typename Value>
void accumulate(Map& map, int key, const Value& value) {
  auto [it, inserted] = map.try_emplace(key, value);
  if (!inserted) it->second += value;
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Adds coeff * d score(x) / d theta.
void add_score_gradient(const ModelParams& p, const IndexedTriple& x, double coeff, Gradient& g) {
  const Vector h = p.entity_vecs.row(x.head).transpose();
  const Vector r = p.relation_vecs.row(x.relation).transpose();
  const Vector t = p.entity_vecs.row(x.tail).transpose();
  switch (p.model) {
    case Model::TransE: {
      const Vector v = h + r - t;
      const double n = v.norm();
      if (n == 0.0) return;  // subgradient 0 at the kink
      const Vector u = (coeff / n) * v;
      accumulate(g.entity, x.head, Vector(-u));
      accumulate(g.relation, x.relation, Vector(-u));
      accumulate(g.entity, x.tail, u);
      return;
    }
    case Model::TransR: {
      const Eigen::MatrixXd& m = p.relation_mats[x.relation];
      const Vector diff = h - t;
      const Vector v = m * diff + r;
      const double n = v.norm();
      if (n == 0.0) return;
      const Vector gv = (-coeff / n) * v;  // coeff * d score / d v
      const Vector back = m.transpose() * gv;
      accumulate(g.entity, x.head, back);
      accumulate(g.entity, x.tail, Vector(-back));
      accumulate(g.relation, x.relation, gv);
      accumulate(g.matrix, x.relation, Eigen::MatrixXd(gv * diff.transpose()));
      return;
    }
    case Model::DistMult: {
      accumulate(g.entity, x.head, Vector(coeff * r.cwiseProduct(t)));
      accumulate(g.relation, x.relation, Vector(coeff * h.cwiseProduct(t)));
      accumulate(g.entity, x.tail, Vector(coeff * h.cwiseProduct(r)));
      return;
    }
    case Model::RESCAL: {
      const Eigen::MatrixXd& m = p.relation_mats[x.relation];
      accumulate(g.entity, x.head, Vector(coeff * (m * t)));
      accumulate(g.entity, x.tail, Vector(coeff * (m.transpose() * h)));
      accumulate(g.matrix, x.relation, Eigen::MatrixXd(coeff * (h * t.transpose())));
      return;
    }
  }
}

double l2_penalty(const ModelParams& p, const IndexedTriple& x, double lambda, Gradient* g) {
  const auto h = p.entity_vecs.row(x.head);
  const auto r = p.relation_vecs.row(x.relation);
  const auto t = p.entity_vecs.row(x.tail);
  double value = h.squaredNorm() + r.squaredNorm() + t.squaredNorm();
  if (g) {
    accumulate(g->entity, x.head, Vector(2.0 * lambda * h.transpose()));
    accumulate(g->relation, x.relation, Vector(2.0 * lambda * r.transpose()));
    accumulate(g->entity, x.tail, Vector(2.0 * lambda * t.transpose()));
  }
  if (p.model == Model::RESCAL) {
    const Eigen::MatrixXd& m = p.relation_mats[x.relation];
    value += m.squaredNorm();
    if (g) accumulate(g->matrix, x.relation, Eigen::MatrixXd(2.0 * lambda * m));
  }
  return lambda * value;
}

}  // namespace

double example_loss(const ModelParams& p, const IndexedTriple& positive, std::span<const IndexedTriple> negatives,
                    const TrainConfig& config, Gradient* grad) {
  const double s_pos = score(p, positive);
  double loss = 0.0;
  if (is_translational(p.model)) {
    for (const auto& neg : negatives) {
      const double s_neg = score(p, neg);
      const double m = config.margin - s_pos + s_neg;
      if (m <= 0) continue;
      loss += m;
      if (grad) {
        add_score_gradient(p, positive, -1.0, *grad);
        add_score_gradient(p, neg, 1.0, *grad);
      }
    }
    return loss;
  }

  loss += softplus(-s_pos);
  if (grad) add_score_gradient(p, positive, -sigmoid(-s_pos), *grad);
  loss += l2_penalty(p, positive, config.regularization, grad);
  for (const auto& neg : negatives) {
    const double s_neg = score(p, neg);
    loss += softplus(s_neg);
    if (grad) add_score_gradient(p, neg, sigmoid(s_neg), *grad);
    loss += l2_penalty(p, neg, config.regularization, grad);
  }
  return loss;
}

GradientCheckResult gradient_check(const ModelParams& params, const IndexedTriple& positive,
                                   std::span<const IndexedTriple> negatives, const TrainConfig& config,
                                   double step) {
  GradientCheckResult result;
  constexpr double kKinkTolerance = 1e-4;

  if (is_translational(params.model)) {
    const auto distance = [&](const IndexedTriple& x) { return -score(params, x); };
    const double s_pos = score(params, positive);
    bool near_kink = distance(positive) < kKinkTolerance;
    for (const auto& neg : negatives) {
      near_kink = near_kink || distance(neg) < kKinkTolerance ||
                  std::abs(config.margin - s_pos + score(params, neg)) < kKinkTolerance;
    }
    if (near_kink) {
      result.excluded = true;
      result.note = "non-differentiable point (zero distance or margin boundary)";
      return result;
    }
  }

  Gradient analytic;
  example_loss(params, positive, negatives, config, &analytic);

  ModelParams probe = params;
  const auto loss_at = [&]() { return example_loss(probe, positive, negatives, config, nullptr); };
  const auto compare = [&](double& slot, double a) {
    const double saved = slot;
    slot = saved + step;
    const double up = loss_at();
    slot = saved - step;
    const double down = loss_at();
    slot = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-7});
    result.max_rel_error = std::max(result.max_rel_error, std::abs(a - numeric) / denom);
    ++result.checked;
  };

  std::set<int> entities, relations;
  entities.insert({positive.head, positive.tail});
  relations.insert(positive.relation);
  for (const auto& n : negatives) {
    entities.insert({n.head, n.tail});
    relations.insert(n.relation);
  }

  for (int e : entities) {
    auto it = analytic.entity.find(e);
    for (int j = 0; j < params.dim; ++j) compare(probe.entity_vecs(e, j), it == analytic.entity.end() ? 0.0 : it->second(j));
  }
  for (int r : relations) {
    auto it = analytic.relation.find(r);
    for (int j = 0; j < params.dim; ++j) {
      compare(probe.relation_vecs(r, j), it == analytic.relation.end() ? 0.0 : it->second(j));
    }
    if (probe.relation_mats.empty()) continue;
    auto mt = analytic.matrix.find(r);
    for (int i = 0; i < params.dim; ++i) {
      for (int j = 0; j < params.dim; ++j) {
        compare(probe.relation_mats[r](i, j), mt == analytic.matrix.end() ? 0.0 : mt->second(i, j));
      }
    }
  }
  return result;
}

// -- training ------------------------------------------------------------------

TrainResult train(Model model, const KgDataset& data, const TrainConfig& config) {
  config.validate();
  if (data.triples.empty()) throw Error("cannot train on a graph without triples");

  Rng rng(config.seed);
  TrainResult result;
  result.params = init_params(model, data.num_entities(), data.num_relations(), config.dim, rng);
  result.params.seed = config.seed;
  ModelParams& p = result.params;

  const TripleFilter known(data.triples);
  std::vector<std::size_t> order(data.triples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<IndexedTriple> negatives;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t used = 0;
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_no) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      Gradient grad;
      for (std::size_t i = start; i < stop; ++i) {
        const IndexedTriple& pos = data.triples[order[i]];
        negatives.clear();
        for (int k = 0; k < config.negatives; ++k) {
          if (auto neg = negative_sample(pos, data.num_entities(), known, rng)) negatives.push_back(*neg);
        }
        if (negatives.empty()) continue;
        epoch_loss += example_loss(p, pos, negatives, config, &grad);
        ++used;
      }
      if (!grad.all_finite()) {
        throw Error("non-finite gradient at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch_no));
      }
      const double lr = config.learning_rate;
      for (const auto& [row, g] : grad.entity) p.entity_vecs.row(row) -= lr * g.transpose();
      for (const auto& [row, g] : grad.relation) p.relation_vecs.row(row) -= lr * g.transpose();
      for (const auto& [rel, g] : grad.matrix) p.relation_mats[rel] -= lr * g;
      if (is_translational(model)) {
        for (const auto& [row, g] : grad.entity) {
          const double n = p.entity_vecs.row(row).norm();
          if (n > 0) p.entity_vecs.row(row) /= n;
        }
      }
    }
    if (!p.all_finite()) throw Error("non-finite parameters after epoch " + std::to_string(epoch));
    result.epoch_loss.push_back(used == 0 ? 0.0 : epoch_loss / static_cast<double>(used));
  }
  return result;
}

// -- evaluation ----------------------------------------------------------------

namespace {

// Scores of (h, r, e) for every entity e, computed in one pass.
Vector tail_scores(const ModelParams& p, int head, int relation) {
  const Vector h = p.entity_vecs.row(head).transpose();
  const Vector r = p.relation_vecs.row(relation).transpose();
  const auto& E = p.entity_vecs;
  switch (p.model) {
    case Model::TransE: {
      const Eigen::RowVectorXd q = (h + r).transpose();
      return -(E.rowwise() - q).rowwise().norm();
    }
    case Model::TransR: {
      const Eigen::MatrixXd& m = p.relation_mats[relation];
      const Eigen::RowVectorXd q = (m * h + r).transpose();
      const Matrix projected = E * m.transpose();
      return -((-projected).rowwise() + q).rowwise().norm();
    }
    case Model::DistMult: return E * h.cwiseProduct(r);
    case Model::RESCAL: return E * (p.relation_mats[relation].transpose() * h);
  }
  return {};
}

}  // namespace

LinkPredictionMetrics evaluate_link_prediction(const ModelParams& params, std::span<const IndexedTriple> test,
                                               std::span<const IndexedTriple> all_triples) {
  const TripleFilter known(all_triples);
  LinkPredictionMetrics m;
  for (const auto& x : test) {
    const Vector scores = tail_scores(params, x.head, x.relation);
    const double truth = scores(x.tail);
    std::size_t greater = 0, equal = 0;
    for (Eigen::Index e = 0; e < scores.size(); ++e) {
      if (e == x.tail || known.contains({x.head, x.relation, static_cast<int>(e)})) continue;
      if (scores(e) > truth) {
        ++greater;
      } else if (scores(e) == truth) {
        ++equal;
      }
    }
    const double rank = 1.0 + static_cast<double>(greater) + static_cast<double>(equal) / 2.0;
    m.mrr += 1.0 / rank;
    m.hits_at_1 += rank <= 1.0 ? 1.0 : 0.0;
    m.hits_at_3 += rank <= 3.0 ? 1.0 : 0.0;
    m.hits_at_10 += rank <= 10.0 ? 1.0 : 0.0;
    ++m.count;
  }
  if (m.count > 0) {
    const double n = static_cast<double>(m.count);
    m.mrr /= n;
    m.hits_at_1 /= n;
    m.hits_at_3 /= n;
    m.hits_at_10 /= n;
  }
  return m;
}

double uniform_random_mrr(std::span<const IndexedTriple> test, std::span<const IndexedTriple> all_triples,
                          int num_entities) {
  if (test.empty()) return 0.0;
  const TripleFilter known(all_triples);
  double total = 0.0;
  for (const auto& x : test) {
    auto tails = known.tails(x.head, x.relation);
    const auto others = static_cast<int>(tails.size()) -
                        (std::binary_search(tails.begin(), tails.end(), x.tail) ? 1 : 0);
    const int n = num_entities - others;
    double harmonic = 0.0;
    for (int k = 1; k <= n; ++k) harmonic += 1.0 / k;
    total += harmonic / n;
  }
  return total / static_cast<double>(test.size());
}

// -- persistence ---------------------------------------------------------------

namespace {

constexpr std::string_view kParamsMagic = "kgef-params 1";

void write_number(std::ostream& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, end - buf);
}

template <typename M>
void write_rows(std::ostream& out, const M& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      write_number(out, m(i, j));
    }
    out << '\n';
  }
}

class ParamsReader {
 public:
  explicit ParamsReader(std::istream& in) : in_(in) {}

  std::string line() {
    std::string s;
    if (!std::getline(in_, s)) throw Error("params file truncated at line " + std::to_string(line_no_ + 1));
    ++line_no_;
    return s;
  }

  std::string field(std::string_view key) {
    const std::string s = line();
    if (s.rfind(std::string(key) + " ", 0) != 0) fail("expected '" + std::string(key) + "'");
    return s.substr(key.size() + 1);
  }

  void expect(std::string_view text) {
    if (line() != text) fail("expected '" + std::string(text) + "'");
  }

  template <typename M>
  void rows(M& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const std::string s = line();
      const char* p = s.data();
      const char* end = s.data() + s.size();
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        while (p < end && *p == ' ') ++p;
        auto [next, ec] = std::from_chars(p, end, m(i, j));
        if (ec != std::errc()) fail("bad number");
        p = next;
      }
      while (p < end && *p == ' ') ++p;
      if (p != end) fail("trailing data");
    }
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error("params line " + std::to_string(line_no_) + ": " + why);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

int to_int(const ParamsReader& r, const std::string& s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < 0) r.fail("bad integer '" + s + "'");
  return v;
}

}  // namespace

void save_params(const ModelParams& p, std::ostream& out) {
  out << kParamsMagic << '\n'
      << "model " << to_string(p.model) << '\n'
      << "dim " << p.dim << '\n'
      << "entities " << p.entity_vecs.rows() << '\n'
      << "relations " << p.relation_vecs.rows() << '\n'
      << "seed " << p.seed << '\n'
      << "entity_vecs\n";
  write_rows(out, p.entity_vecs);
  out << "relation_vecs\n";
  write_rows(out, p.relation_vecs);
  if (!p.relation_mats.empty()) {
    out << "relation_mats\n";
    for (const auto& m : p.relation_mats) write_rows(out, m);
  }
  out << "end\n";
}

ModelParams load_params(std::istream& in) {
  ParamsReader r(in);
  r.expect(kParamsMagic);
  ModelParams p;
  const std::string model = r.field("model");
  auto parsed = parse_model(model);
  if (!parsed) r.fail("unknown model '" + model + "'");
  p.model = *parsed;
  p.dim = to_int(r, r.field("dim"));
  const int entities = to_int(r, r.field("entities"));
  const int relations = to_int(r, r.field("relations"));
  const std::string seed = r.field("seed");
  auto [sp, sec] = std::from_chars(seed.data(), seed.data() + seed.size(), p.seed);
  if (sec != std::errc() || sp != seed.data() + seed.size()) r.fail("bad seed");
  if (p.dim < 1) r.fail("dim must be positive");

  p.entity_vecs.resize(entities, p.dim);
  p.relation_vecs.resize(relations, p.dim);
  r.expect("entity_vecs");
  r.rows(p.entity_vecs);
  r.expect("relation_vecs");
  r.rows(p.relation_vecs);
  if (has_relation_matrices(p.model)) {
    r.expect("relation_mats");
    p.relation_mats.assign(relations, Eigen::MatrixXd(p.dim, p.dim));
    for (auto& m : p.relation_mats) r.rows(m);
  }
  r.expect("end");
  return p;
}

void save_params(const ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  save_params(params, out);
}

ModelParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return load_params(in);
}

void write_labels(std::ostream& out, std::span<const std::string> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << '\t' << labels[i] << '\n';
}

std::vector<std::string> read_labels(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error("label line without tab: " + line);
    if (std::stoul(line.substr(0, tab)) != out.size()) throw Error("label ids must be dense and ordered");
    out.push_back(line.substr(tab + 1));
  }
  return out;
}

}  // namespace kgef
