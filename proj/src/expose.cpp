#include "kgef/expose.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

namespace kgef {

EntityEmbeddings::EntityEmbeddings(std::vector<std::string> labels, Matrix vectors)
    : labels_(std::move(labels)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(labels_.size()) != vectors_.rows()) {
    throw Error("embedding labels and rows differ in count");
  }
  if (!std::is_sorted(labels_.begin(), labels_.end())) throw Error("embedding labels must be sorted");
}

std::optional<int> EntityEmbeddings::find(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

double cosine(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

namespace {

int require(const EntityEmbeddings& emb, const std::string& id) {
  auto i = emb.find(id);
  if (!i) throw Error("no embedding for " + id);
  return *i;
}

bool ranks_before(const Neighbor& a, const Neighbor& b) {
  if (a.cosine != b.cosine) return a.cosine > b.cosine;
  return a.id < b.id;
}

}  // namespace

std::vector<Neighbor> similar_authors(const EntityEmbeddings& emb, const std::string& target,
                                      std::span<const std::string> candidates, std::vector<std::string>* warnings) {
  const auto t = emb.row(require(emb, target));
  const double tn = t.norm();
  if (tn == 0.0) throw Error("target " + target + " has a zero embedding");

  std::vector<Neighbor> out;
  out.reserve(candidates.size());
  for (const auto& id : candidates) {
    if (id == target) throw Error("target " + target + " listed among its own candidates");
    const auto c = emb.row(require(emb, id));
    const double cn = c.norm();
    if (cn == 0.0) {
      if (warnings) warnings->push_back("zero embedding, candidate skipped: " + id);
      continue;
    }
    out.push_back({id, t.dot(c) / (tn * cn)});
  }
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

std::size_t top_count(int k_percent, std::size_t n) {
  if (k_percent < 0 || k_percent > 100) throw Error("k must be a percentage");
  return (static_cast<std::size_t>(k_percent) * n + 99) / 100;
}

std::vector<std::string> draw_sample(std::span<const std::string> western_ids, std::size_t size, std::uint64_t seed) {
  if (size > western_ids.size()) {
    throw Error("sample size " + std::to_string(size) + " exceeds the " + std::to_string(western_ids.size()) +
                " Western authors available");
  }
  std::vector<std::string> population(western_ids.begin(), western_ids.end());
  std::sort(population.begin(), population.end());
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(size);
  std::sample(population.begin(), population.end(), std::back_inserter(out), size, rng);
  return out;
}

ExposureReport exposure_ratios(const EntityEmbeddings& emb, const std::map<std::string, Status>& statuses,
                               std::span<const std::string> sample, std::span<const int> k_levels) {
  ExposureReport report;
  report.sample_size = sample.size();
  for (int k : k_levels) report.ratios[k];

  std::vector<std::string> everyone;
  everyone.reserve(statuses.size());
  for (const auto& [id, s] : statuses) everyone.push_back(id);

  std::vector<std::string> candidates;
  for (const auto& target : sample) {
    auto st = statuses.find(target);
    if (st == statuses.end()) throw Error("sampled author " + target + " has no status");
    if (st->second != Status::Western) throw Error("sampled author " + target + " is not Western");

    candidates.clear();
    for (const auto& id : everyone) {
      if (id != target) candidates.push_back(id);
    }
    TargetRanking ranking{target, similar_authors(emb, target, candidates, &report.warnings)};
    for (auto& [k, ratio] : report.ratios) {
      const std::size_t top = top_count(k, ranking.ranked.size());
      for (std::size_t i = 0; i < top; ++i) {
        if (statuses.at(ranking.ranked[i].id) == Status::Transnational) ++ratio.count;
      }
      ratio.pooled += top;
    }
    report.per_target.push_back(std::move(ranking));
  }
  for (auto& [k, ratio] : report.ratios) {
    ratio.percent = ratio.pooled == 0 ? 0.0 : 100.0 * static_cast<double>(ratio.count) / ratio.pooled;
  }
  std::sort(report.warnings.begin(), report.warnings.end());
  report.warnings.erase(std::unique(report.warnings.begin(), report.warnings.end()), report.warnings.end());
  return report;
}

ContinentFlow continent_flows(const EntityEmbeddings& emb, const std::map<std::string, Status>& statuses,
                              std::span<const std::string> sample,
                              const std::map<std::string, std::string>& author_country,
                              const std::map<std::string, std::string>& continent_of_country) {
  std::vector<std::string> transnational;
  for (const auto& [id, s] : statuses) {
    if (s == Status::Transnational) transnational.push_back(id);
  }
  const auto continent = [&](const std::string& id) -> std::string {
    auto c = author_country.find(id);
    if (c == author_country.end()) return std::string(kUnknownContinent);
    auto k = continent_of_country.find(c->second);
    return k == continent_of_country.end() ? std::string(kUnknownContinent) : k->second;
  };

  ContinentFlow flow;
  for (const auto& target : sample) {
    auto ranked = similar_authors(emb, target, transnational);
    const std::string from = continent(target);
    const std::string to = ranked.empty() ? std::string(kUnknownContinent) : continent(ranked.front().id);
    ++flow.counts[{from, to}];
    if (from == kUnknownContinent || to == kUnknownContinent) ++flow.unknown;
  }
  return flow;
}

std::map<std::string, std::string> parse_continents(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto f = split_csv_line(trimmed);
    if (f.size() != 2) throw Error("continents line " + std::to_string(line_no) + ": expected 2 fields");
    std::string code = trim(f[0]);
    if (code == "country_code") continue;
    std::transform(code.begin(), code.end(), code.begin(), [](unsigned char c) { return std::toupper(c); });
    out[code] = trim(f[1]);
  }
  return out;
}

std::map<std::string, std::string> load_continents(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read continents " + path.string());
  return parse_continents(in);
}

void write_exposure_csv(std::ostream& out, const ExposureReport& report) {
  out << "k,percent,count,pooled\n";
  for (const auto& [k, r] : report.ratios) {
    out << k << ',' << format_fixed(r.percent, 1) << ',' << r.count << ',' << r.pooled << '\n';
  }
}

ExposureReport read_exposure_csv(std::istream& in) {
  ExposureReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (++line_no == 1 || trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 4) throw Error("exposure line " + std::to_string(line_no) + ": expected 4 fields");
    try {
      ExposureRatio r{std::stod(f[1]), std::stoul(f[2]), std::stoul(f[3])};
      report.ratios[std::stoi(f[0])] = r;
    } catch (const std::logic_error&) {
      throw Error("exposure line " + std::to_string(line_no) + ": bad number");
    }
  }
  return report;
}

void write_flow_csv(std::ostream& out, const ContinentFlow& flow) {
  out << "western_continent,transnational_continent,count\n";
  for (const auto& [key, count] : flow.counts) {
    out << csv_escape(key.first) << ',' << csv_escape(key.second) << ',' << count << '\n';
  }
}

ContinentFlow read_flow_csv(std::istream& in) {
  ContinentFlow flow;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (++line_no == 1 || trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 3) throw Error("flow line " + std::to_string(line_no) + ": expected 3 fields");
    std::size_t count = 0;
    try {
      count = std::stoul(f[2]);
    } catch (const std::logic_error&) {
      throw Error("flow line " + std::to_string(line_no) + ": bad count");
    }
    flow.counts[{f[0], f[1]}] = count;
    if (f[0] == kUnknownContinent || f[1] == kUnknownContinent) flow.unknown += count;
  }
  return flow;
}

std::string exposure_cell(const ExposureRatio& ratio) {
  return format_fixed(ratio.percent, 1) + "% (" + std::to_string(ratio.count) + ")";
}

}  // namespace kgef
