#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgef/classify.hpp"
#include "kgef/embed.hpp"

namespace kgef {

/// Entity vectors addressed by label (e.g. "author:Q42").
class EntityEmbeddings {
 public:
  EntityEmbeddings(std::vector<std::string> labels, Matrix vectors);

  std::optional<int> find(std::string_view label) const;
  const std::string& label(int index) const { return labels_[index]; }
  Eigen::Ref<const Eigen::RowVectorXd> row(int index) const { return vectors_.row(index); }
  std::size_t size() const { return labels_.size(); }

  void scale(double factor) { vectors_ *= factor; }

 private:
  std::vector<std::string> labels_;
  Matrix vectors_;
};

double cosine(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b);

struct Neighbor {
  std::string id;
  double cosine = 0.0;
};

/// Candidates by descending cosine to `target`, ties by ascending id.
/// Candidates with a zero vector are dropped and named in `warnings`.
/// Throws Error if the target or a candidate has no embedding, or the target
/// is among the candidates.
std::vector<Neighbor> similar_authors(const EntityEmbeddings& emb, const std::string& target,
                                      std::span<const std::string> candidates,
                                      std::vector<std::string>* warnings = nullptr);

/// ceil(k_percent * n / 100).
std::size_t top_count(int k_percent, std::size_t n);

/// Uniform sample without replacement; throws Error if size exceeds the population.
std::vector<std::string> draw_sample(std::span<const std::string> western_ids, std::size_t size,
                                     std::uint64_t seed);

inline constexpr int kDefaultKLevels[] = {1, 5, 10};

struct ExposureRatio {
  double percent = 0.0;       // Transnational share of the pooled top lists
  std::size_t count = 0;      // Transnational authors in the pooled top lists
  std::size_t pooled = 0;     // total list slots pooled over the sample
};

struct TargetRanking {
  std::string target;
  std::vector<Neighbor> ranked;
};

struct ExposureReport {
  std::string portion_label;
  Model model = Model::TransE;
  std::size_t sample_size = 0;
  std::map<int, ExposureRatio> ratios;  // keyed by k percent
  std::vector<TargetRanking> per_target;
  std::vector<std::string> warnings;
};

/// `statuses` maps every rankable author id to its status. Each target is
/// ranked against all other authors in `statuses`; the top ceil(k% * n)
/// of each list are pooled over the sample.
ExposureReport exposure_ratios(const EntityEmbeddings& emb, const std::map<std::string, Status>& statuses,
                               std::span<const std::string> sample, std::span<const int> k_levels = kDefaultKLevels);

inline constexpr std::string_view kUnknownContinent = "unknown";

struct ContinentFlow {
  std::map<std::pair<std::string, std::string>, std::size_t> counts;  // (western, transnational)
  std::size_t unknown = 0;  // targets whose own or matched continent is unknown
};

/// For each target, the most similar Transnational author; the pair of
/// continents (from birth countries) is counted. A missing country or
/// continent mapping on either side lands in an "unknown" row or column.
ContinentFlow continent_flows(const EntityEmbeddings& emb, const std::map<std::string, Status>& statuses,
                              std::span<const std::string> sample,
                              const std::map<std::string, std::string>& author_country,
                              const std::map<std::string, std::string>& continent_of_country);

/// `country_code,continent` CSV.
std::map<std::string, std::string> parse_continents(std::istream& in);
std::map<std::string, std::string> load_continents(const std::filesystem::path& path);

/// `k,percent,count,pooled`
void write_exposure_csv(std::ostream& out, const ExposureReport& report);
ExposureReport read_exposure_csv(std::istream& in);
/// `western_continent,transnational_continent,count`
void write_flow_csv(std::ostream& out, const ContinentFlow& flow);
ContinentFlow read_flow_csv(std::istream& in);

/// Cell text "34.8% (34)".
std::string exposure_cell(const ExposureRatio& ratio);

}  // namespace kgef
