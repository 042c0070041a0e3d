#include "kgef/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "kgef/align.hpp"
#include "kgef/classify.hpp"
#include "kgef/expose.hpp"
#include "kgef/graph.hpp"
#include "kgef/ingest.hpp"
#include "kgef/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace kgef {

// -- config --------------------------------------------------------------------

namespace {

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  for (const auto& item : split_csv_line(value)) {
    std::string t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || p != end) throw Error("config: bad value for " + key + ": '" + value + "'");
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::parse(std::istream& in, const fs::path& base_dir) {
  PipelineConfig c;
  const auto path = [&](const std::string& v) { return fs::path(v).is_absolute() ? fs::path(v) : base_dir / v; };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));

    if (key == "sources_dir") {
      c.sources_dir = path(value);
    } else if (key == "taxonomy") {
      c.taxonomy = path(value);
    } else if (key == "minorities") {
      c.minorities = path(value);
    } else if (key == "continents") {
      c.continents = path(value);
    } else if (key == "out") {
      c.out_dir = path(value);
    } else if (key == "seed") {
      set_seed(c, parse_number<std::uint64_t>(key, value));
    } else if (key == "dim") {
      c.train.dim = parse_number<int>(key, value);
    } else if (key == "epochs") {
      c.train.epochs = parse_number<int>(key, value);
    } else if (key == "learning_rate") {
      c.train.learning_rate = parse_number<double>(key, value);
    } else if (key == "margin") {
      c.train.margin = parse_number<double>(key, value);
    } else if (key == "negatives") {
      c.train.negatives = parse_number<int>(key, value);
    } else if (key == "batch_size") {
      c.train.batch_size = parse_number<int>(key, value);
    } else if (key == "regularization") {
      c.train.regularization = parse_number<double>(key, value);
    } else if (key == "sample_size") {
      c.sample_size = parse_number<std::size_t>(key, value);
    } else if (key == "k_levels") {
      c.k_levels.clear();
      for (const auto& k : split_list(value)) c.k_levels.push_back(parse_number<int>(key, k));
    } else if (key == "portions") {
      c.portions = split_list(value);
    } else if (key == "models") {
      c.models.clear();
      for (const auto& m : split_list(value)) {
        auto model = parse_model(m);
        if (!model) throw Error("config: unknown model '" + m + "'");
        c.models.push_back(*model);
      }
    } else if (key == "relations") {
      c.relations.clear();
      for (const auto& r : split_list(value)) {
        if (r == "all") continue;
        auto rel = parse_relation(r);
        if (!rel) throw Error("config: unknown relation '" + r + "'");
        c.relations.insert(*rel);
      }
    } else {
      throw Error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path.string());
  return parse(in, path.parent_path());
}

void PipelineConfig::validate() const {
  const auto need = [](const fs::path& p, const char* what, bool dir) {
    if (p.empty()) throw Error(std::string("config: ") + what + " not set");
    if (dir ? !fs::is_directory(p) : !fs::is_regular_file(p)) {
      throw Error(std::string("config: ") + what + " not found: " + p.string());
    }
  };
  need(sources_dir, "sources_dir", true);
  need(taxonomy, "taxonomy", false);
  need(minorities, "minorities", false);
  need(continents, "continents", false);
  train.validate();
  if (sample_size == 0) throw Error("config: sample_size must be positive");
  if (k_levels.empty()) throw Error("config: k_levels is empty");
  for (int k : k_levels) {
    if (k < 1 || k > 100) throw Error("config: k level " + std::to_string(k) + " outside 1..100");
  }
  if (models.empty()) throw Error("config: no models");
  for (const auto& p : portions) {
    if (p != "all" && !portion_source(p)) throw Error("config: unknown portion '" + p + "'");
  }
}

void set_seed(PipelineConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.train.seed = seed;
}

std::optional<Source> portion_source(const std::string& label) {
  if (label == "all") return std::nullopt;
  auto s = parse_source(label);
  if (!s || *s == Source::GB) throw Error("unknown portion '" + label + "'");
  return s;
}

MissingPredecessor::MissingPredecessor(std::string stage, std::string predecessor, const std::string& detail)
    : Error("stage '" + stage + "' needs stage '" + predecessor + "' first: " + detail),
      stage_(std::move(stage)),
      predecessor_(std::move(predecessor)) {}

// -- manifest ------------------------------------------------------------------

std::string file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

namespace {

class Manifest {
 public:
  explicit Manifest(fs::path out_dir) : out_(std::move(out_dir)) {
    const fs::path p = out_ / "manifest.json";
    if (!fs::exists(p)) return;
    std::ifstream in(p);
    data_ = json::parse(in, nullptr, false);
    if (data_.is_discarded() || !data_.is_object()) throw Error("corrupt manifest " + p.string());
  }

  // Checks that `predecessor` ran and its recorded outputs are unchanged.
  void require(const std::string& stage, const std::string& predecessor) const {
    if (!data_.contains(predecessor)) throw MissingPredecessor(stage, predecessor, "not recorded in manifest");
    for (const auto& [rel, hash] : data_[predecessor]["outputs"].items()) {
      const fs::path p = out_ / rel;
      if (!fs::exists(p)) throw MissingPredecessor(stage, predecessor, "missing artifact " + rel);
      if (file_hash(p) != hash.get<std::string>()) {
        throw MissingPredecessor(stage, predecessor, "artifact changed since it was produced: " + rel);
      }
    }
  }

  // Requires a specific artifact recorded by `predecessor`.
  void require_output(const std::string& stage, const std::string& predecessor, const std::string& rel) const {
    require(stage, predecessor);
    if (!data_[predecessor]["outputs"].contains(rel)) {
      throw MissingPredecessor(stage, predecessor, "missing artifact " + rel);
    }
  }

  // `merge` keeps outputs from earlier runs of the same stage (train and
  // expose run per model and portion).
  void record(const std::string& stage, const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs,
              bool merge) {
    json entry = merge && data_.contains(stage) ? data_[stage] : json::object();
    if (!entry.contains("inputs")) entry["inputs"] = json::object();
    if (!entry.contains("outputs")) entry["outputs"] = json::object();
    for (const auto& p : inputs) entry["inputs"][p.lexically_normal().generic_string()] = file_hash(p);
    for (const auto& rel : outputs) entry["outputs"][rel.generic_string()] = file_hash(out_ / rel);
    data_[stage] = std::move(entry);
    std::ofstream out(out_ / "manifest.json", std::ios::binary);
    out << data_.dump(2) << '\n';
    if (!out) throw Error("cannot write manifest");
  }

 private:
  fs::path out_;
  json data_ = json::object();
};

// Collects outputs relative to the output directory.
class Outputs {
 public:
  explicit Outputs(fs::path root) : root_(std::move(root)) {}

  std::ofstream open(const fs::path& rel) {
    fs::create_directories((root_ / rel).parent_path());
    std::ofstream out(root_ / rel, std::ios::binary);
    if (!out) throw Error("cannot write " + (root_ / rel).string());
    files_.push_back(rel);
    return out;
  }

  void write(const fs::path& rel, const std::string& content) {
    auto out = open(rel);
    out << content;
  }

  const std::vector<fs::path>& files() const { return files_; }
  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  std::vector<fs::path> files_;
};

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return in;
}

std::string model_dir(Model m, const std::string& portion) {
  return "train/" + std::string(to_string(m)) + "_" + portion;
}

std::string expose_stem(Model m, const std::string& portion) {
  return "expose/" + std::string(to_string(m)) + "_" + portion;
}

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::vector<AuthorEntity> read_authors(const fs::path& path) {
  auto in = open_input(path);
  std::vector<AuthorEntity> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(path.string() + " line " + std::to_string(line_no) + ": malformed JSON");
    out.push_back(author_from_json(j));
  }
  return out;
}

std::vector<StatusAssignment> read_assignment_file(const fs::path& path) {
  auto in = open_input(path);
  return read_assignments(in);
}

struct AlignedRecords {
  std::vector<RawWorkRecord> works;
  std::vector<RawEditionRecord> editions;
};

AlignedRecords read_aligned(const fs::path& dir, std::vector<std::string>& warnings) {
  AlignedRecords out;
  for (Source s : {Source::WD, Source::OL, Source::GR}) {
    for (RecordKind kind : {RecordKind::Work, RecordKind::Edition}) {
      const fs::path p = dir / source_file_name(s, kind);
      ParsedFile parsed = parse_source_file(p, s, kind);
      if (parsed.warning_count() > 0) throw Error("aligned file " + p.string() + " does not parse cleanly");
      for (auto& r : parsed.records) {
        if (auto* w = std::get_if<RawWorkRecord>(&r)) out.works.push_back(std::move(*w));
        if (auto* e = std::get_if<RawEditionRecord>(&r)) out.editions.push_back(std::move(*e));
      }
    }
  }
  (void)warnings;
  return out;
}

std::string issue_text(const ParseIssue& issue) {
  return fs::path(issue.file).filename().string() + ":" + std::to_string(issue.line) + ": " + issue.message;
}

// -- stages --------------------------------------------------------------------

StageResult stage_ingest(const PipelineConfig& c, Manifest& manifest) {
  StageResult result;
  IngestBatch batch = ingest_directory(c.sources_dir);
  auto& wd = batch.sources[Source::WD].authors;
  auto filtered = filter_by_birth_year(std::move(wd));
  wd = std::move(filtered.kept);
  if (filtered.removed > 0) {
    result.warnings.push_back("removed " + std::to_string(filtered.removed) +
                              " Wikidata authors born before " + std::to_string(kBirthYearCutoff) +
                              " or without a birth year");
  }

  Outputs out(c.out_dir);
  std::vector<fs::path> inputs;
  for (Source s : kAllSources) {
    for (RecordKind kind : {RecordKind::Author, RecordKind::Work, RecordKind::Edition}) {
      const fs::path src = c.sources_dir / source_file_name(s, kind);
      if (fs::exists(src)) inputs.push_back(src);
    }
    const auto it = batch.sources.find(s);
    if (it == batch.sources.end()) continue;
    const auto& recs = it->second;
    auto a = out.open(fs::path("ingest") / source_file_name(s, RecordKind::Author));
    for (const auto& r : recs.authors) a << to_json_line(r) << '\n';
    auto w = out.open(fs::path("ingest") / source_file_name(s, RecordKind::Work));
    for (const auto& r : recs.works) w << to_json_line(r) << '\n';
    auto e = out.open(fs::path("ingest") / source_file_name(s, RecordKind::Edition));
    for (const auto& r : recs.editions) e << to_json_line(r) << '\n';
  }

  auto issues = out.open("ingest/issues.csv");
  issues << "level,file,line,message\n";
  for (const auto& i : batch.issues) {
    const bool warning = i.level == ParseIssue::Level::Warning;
    issues << (warning ? "warning" : "debug") << ',' << csv_escape(fs::path(i.file).filename().string()) << ','
           << i.line << ',' << csv_escape(i.message) << '\n';
    if (warning) result.warnings.push_back(issue_text(i));
  }
  issues.close();
  manifest.record("ingest", inputs, out.files(), false);
  result.outputs = out.files();
  return result;
}

StageResult stage_align(const PipelineConfig& c, Manifest& manifest) {
  manifest.require("align", "ingest");
  StageResult result;
  IngestBatch batch = ingest_directory(c.out_dir / "ingest");
  for (const auto& i : batch.issues) {
    if (i.level == ParseIssue::Level::Warning) throw Error("ingested data no longer valid: " + issue_text(i));
  }
  const auto& wd = batch.sources[Source::WD].authors;
  const MatchResult ol = match_openlibrary(wd, batch.sources[Source::OL].authors);
  const MatchResult gr = match_goodreads(wd, batch.sources[Source::GR].authors);
  const std::vector<AuthorEntity> authors = resolve_precedence(wd, ol, gr);
  WorkSelection selection = select_works(authors, batch);
  const IsbnJoinStats joined = join_isbn(selection.works, selection.editions, batch.sources[Source::GB].works);
  if (joined.ambiguous_isbns > 0) {
    result.warnings.push_back(std::to_string(joined.ambiguous_isbns) + " ISBNs claimed by several Google Books records");
  }
  if (selection.dropped_works > 0) {
    result.warnings.push_back(std::to_string(selection.dropped_works) + " works dropped without a linked author");
  }

  Outputs out(c.out_dir);
  {
    auto a = out.open("align/authors.jsonl");
    for (const auto& author : authors) a << to_json(author).dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
  for (Source s : {Source::WD, Source::OL, Source::GR}) {
    auto w = out.open(fs::path("align") / source_file_name(s, RecordKind::Work));
    for (const auto& r : selection.works) {
      if (r.source == s) w << to_json_line(r) << '\n';
    }
    auto e = out.open(fs::path("align") / source_file_name(s, RecordKind::Edition));
    for (const auto& r : selection.editions) {
      if (r.source == s) e << to_json_line(r) << '\n';
    }
  }
  {
    auto report = out.open("align/alignment.csv");
    write_alignment_report(report, ol, gr);
  }
  manifest.record("align", {}, out.files(), false);
  result.outputs = out.files();
  return result;
}

StageResult stage_classify(const PipelineConfig& c, Manifest& manifest) {
  manifest.require("classify", "align");
  StageResult result;
  const auto authors = read_authors(c.out_dir / "align/authors.jsonl");
  const auto taxonomy = CountryTaxonomy::load(c.taxonomy);
  const auto minorities = load_minorities(c.minorities);
  const ClassifyResult classified = classify_all(authors, taxonomy, minorities);

  Outputs out(c.out_dir);
  {
    auto a = out.open("classify/assignments.csv");
    write_assignments(a, classified.assignments);
  }
  {
    auto e = out.open("classify/errors.csv");
    e << "canonical_id,message\n";
    for (const auto& [id, message] : classified.errors) {
      e << csv_escape(id) << ',' << csv_escape(message) << '\n';
      result.warnings.push_back("unclassified " + id + ": " + message);
    }
  }
  manifest.record("classify", {c.taxonomy, c.minorities}, out.files(), false);
  result.outputs = out.files();
  return result;
}

StageResult stage_build(const PipelineConfig& c, Manifest& manifest) {
  manifest.require("build", "classify");
  StageResult result;
  const auto authors = read_authors(c.out_dir / "align/authors.jsonl");
  const auto assignments = read_assignment_file(c.out_dir / "classify/assignments.csv");
  const AlignedRecords records = read_aligned(c.out_dir / "align", result.warnings);
  const Graph graph = build_graph(authors, assignments, records.works, records.editions);
  const auto findings = check_patterns(graph);
  if (!findings.empty()) throw Error("graph pattern check failed: " + findings.front());

  Outputs out(c.out_dir);
  {
    auto g = out.open("graph/graph.nq");
    serialize(graph, g);
  }
  {
    auto s = out.open("graph/graph_stats.csv");
    write_graph_stats_csv(s, count_stats(graph));
  }
  manifest.record("build", {}, out.files(), false);
  result.outputs = out.files();
  return result;
}

StageResult stage_stats(const PipelineConfig& c, Manifest& manifest) {
  manifest.require("stats", "build");
  StageResult result;
  const auto authors = read_authors(c.out_dir / "align/authors.jsonl");
  const auto assignments = read_assignment_file(c.out_dir / "classify/assignments.csv");
  const Graph graph = deserialize(c.out_dir / "graph/graph.nq");

  std::map<std::string, Gender> genders;
  for (const auto& a : authors) genders[a.canonical_id] = a.gender.value_or(Gender::Unknown);

  // Works per author: Wikidata statements alone, and the integrated graph.
  std::map<std::string, std::map<std::string, std::size_t>> works;
  const std::string prefix = ids::author("");
  for (const auto& t : graph.triples()) {
    if (t.predicate != Relation::AttributedTo) continue;
    const std::string id = t.object.value.substr(prefix.size());
    if (t.provenance == Source::WD) ++works["WD"][id];
    ++works["integrated"][id];
  }
  const auto report = representation_stats(tally_representation(assignments, genders, works, authors.size()));

  Outputs out(c.out_dir);
  {
    auto s = out.open("stats/stats.csv");
    write_stats_csv(s, report);
  }
  manifest.record("stats", {}, out.files(), false);
  result.outputs = out.files();
  return result;
}

std::vector<Model> chosen_models(const PipelineConfig& c, const StageOptions& o) {
  return o.models.empty() ? c.models : o.models;
}

std::vector<std::string> chosen_portions(const PipelineConfig& c, const StageOptions& o) {
  return o.portions.empty() ? c.portions : o.portions;
}

StageResult stage_train(const PipelineConfig& c, const StageOptions& o, Manifest& manifest) {
  manifest.require("train", "build");
  StageResult result;
  const Graph graph = deserialize(c.out_dir / "graph/graph.nq");
  Outputs out(c.out_dir);
  for (const auto& label : chosen_portions(c, o)) {
    const auto source = portion_source(label);
    const Graph sub = source ? portion(graph, *source) : graph;
    const KgDataset data = KgDataset::from_graph(sub, c.relations);
    if (data.triples.empty()) throw Error("portion " + label + " has no triples to train on");
    for (Model m : chosen_models(c, o)) {
      const TrainResult trained = train(m, data, c.train);
      const std::string dir = model_dir(m, label);
      {
        auto p = out.open(dir + "/params.txt");
        save_params(trained.params, p);
      }
      {
        auto e = out.open(dir + "/entities.tsv");
        write_labels(e, data.entity_labels);
      }
      {
        auto r = out.open(dir + "/relations.tsv");
        write_labels(r, data.relation_labels);
      }
      {
        auto l = out.open(dir + "/loss.csv");
        l << "epoch,loss\n";
        for (std::size_t i = 0; i < trained.epoch_loss.size(); ++i) l << i + 1 << ',' << shortest(trained.epoch_loss[i]) << '\n';
      }
    }
  }
  manifest.record("train", {}, out.files(), true);
  result.outputs = out.files();
  return result;
}

EntityEmbeddings load_embeddings(const fs::path& dir) {
  ModelParams params = load_params(dir / "params.txt");
  auto in = open_input(dir / "entities.tsv");
  auto labels = read_labels(in);
  return EntityEmbeddings(std::move(labels), std::move(params.entity_vecs));
}

StageResult stage_expose(const PipelineConfig& c, const StageOptions& o, Manifest& manifest) {
  manifest.require("expose", "train");
  StageResult result;
  const auto authors = read_authors(c.out_dir / "align/authors.jsonl");
  const auto assignments = read_assignment_file(c.out_dir / "classify/assignments.csv");
  const auto continents = load_continents(c.continents);

  std::map<std::string, std::string> country;
  for (const auto& a : authors) {
    if (!a.country_of_birth) continue;
    std::string code = trim(*a.country_of_birth);
    std::transform(code.begin(), code.end(), code.begin(), [](unsigned char ch) { return std::toupper(ch); });
    country[ids::author(a.canonical_id)] = code;
  }

  Outputs out(c.out_dir);
  for (const auto& label : chosen_portions(c, o)) {
    portion_source(label);
    for (Model m : chosen_models(c, o)) {
      const std::string dir = model_dir(m, label);
      manifest.require_output("expose", "train", dir + "/params.txt");
      const EntityEmbeddings emb = load_embeddings(c.out_dir / dir);

      std::map<std::string, Status> statuses;
      std::vector<std::string> western;
      for (const auto& a : assignments) {
        const std::string id = ids::author(a.canonical_id);
        if (!emb.find(id)) continue;
        statuses[id] = a.status;
        if (a.status == Status::Western) western.push_back(id);
      }
      if (c.sample_size > western.size()) {
        throw Error("portion " + label + ": sample size " + std::to_string(c.sample_size) + " exceeds the " +
                    std::to_string(western.size()) + " Western authors with embeddings");
      }
      const auto sample = draw_sample(western, c.sample_size, c.seed);
      ExposureReport report = exposure_ratios(emb, statuses, sample, c.k_levels);
      report.portion_label = label;
      report.model = m;
      for (const auto& w : report.warnings) result.warnings.push_back(dir + ": " + w);
      const ContinentFlow flow = continent_flows(emb, statuses, sample, country, continents);

      const std::string stem = expose_stem(m, label);
      {
        auto e = out.open(stem + ".exposure.csv");
        write_exposure_csv(e, report);
      }
      {
        auto f = out.open(stem + ".flows.csv");
        write_flow_csv(f, flow);
      }
    }
  }
  manifest.record("expose", {c.continents}, out.files(), true);
  result.outputs = out.files();
  return result;
}

// Parsed rows of stats/stats.csv.
struct StatsRow {
  std::string section, group, gender, status, count, value;
};

std::vector<StatsRow> read_stats_rows(const fs::path& path) {
  auto in = open_input(path);
  std::vector<StatsRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (++line_no == 1 || trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 6) throw Error(path.string() + " line " + std::to_string(line_no) + ": expected 6 fields");
    rows.push_back({f[0], f[1], f[2], f[3], f[4], f[5]});
  }
  return rows;
}

std::string read_file(const fs::path& path) {
  auto in = open_input(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

constexpr const char* kWesternColor = "#4c72b0";
constexpr const char* kTransnationalColor = "#dd8452";

StageResult stage_report(const PipelineConfig& c, const StageOptions& o, Manifest& manifest) {
  manifest.require("report", "stats");
  StageResult result;
  const auto models = chosen_models(c, o);
  const auto portions = chosen_portions(c, o);

  Outputs out(c.out_dir);
  out.write("report/stats.csv", read_file(c.out_dir / "stats/stats.csv"));
  out.write("report/graph_stats.csv", read_file(c.out_dir / "graph/graph_stats.csv"));

  // Table of exposure ratios: one row per model, k level x portion columns.
  std::map<std::pair<Model, std::string>, ExposureReport> exposures;
  for (Model m : models) {
    for (const auto& p : portions) {
      const std::string rel = expose_stem(m, p) + ".exposure.csv";
      manifest.require_output("report", "expose", rel);
      auto in = open_input(c.out_dir / rel);
      exposures[{m, p}] = read_exposure_csv(in);
    }
  }
  {
    auto e = out.open("report/exposure.csv");
    e << "model";
    for (const auto& p : portions) {
      for (int k : c.k_levels) e << ",top" << k << '_' << p;
    }
    e << '\n';
    for (Model m : models) {
      e << to_string(m);
      for (const auto& p : portions) {
        const auto& ratios = exposures.at({m, p}).ratios;
        for (int k : c.k_levels) {
          auto it = ratios.find(k);
          e << ',' << csv_escape(it == ratios.end() ? std::string() : exposure_cell(it->second));
        }
      }
      e << '\n';
    }
  }
  {
    auto f = out.open("report/flows.csv");
    f << "model,portion,western_continent,transnational_continent,count\n";
    for (Model m : models) {
      for (const auto& p : portions) {
        auto in = open_input(c.out_dir / (expose_stem(m, p) + ".flows.csv"));
        for (const auto& [key, count] : read_flow_csv(in).counts) {
          f << to_string(m) << ',' << csv_escape(p) << ',' << csv_escape(key.first) << ',' << csv_escape(key.second)
            << ',' << count << '\n';
        }
      }
    }
  }

  // Plots.
  const auto rows = read_stats_rows(c.out_dir / "stats/stats.csv");
  const std::vector<std::string> generations = {"Silent", "Boomer", "GenX", "Millennial", "Other"};
  svg::Series western{"Western", std::vector<double>(generations.size(), 0.0), kWesternColor};
  svg::Series transnational{"Transnational", std::vector<double>(generations.size(), 0.0), kTransnationalColor};
  std::vector<svg::TreemapItem> tiles;
  for (const auto& r : rows) {
    if (r.section == "cells") {
      auto g = std::find(generations.begin(), generations.end(), r.group) - generations.begin();
      if (g == static_cast<long>(generations.size())) continue;
      (r.status == "Western" ? western : transnational).values[g] += std::stod(r.count);
    } else if (r.section == "works") {
      tiles.push_back({r.group + " " + r.status, std::stod(r.count),
                       r.status == "Western" ? kWesternColor : kTransnationalColor});
    }
  }
  out.write("report/generations.svg",
            svg::bar_chart("Authors per generation and status", generations, {western, transnational}, true));
  out.write("report/works_treemap.svg", svg::treemap("Works per portion and status", tiles));

  std::vector<std::string> columns;
  for (const auto& p : portions) {
    for (int k : c.k_levels) columns.push_back("top" + std::to_string(k) + "% " + p);
  }
  static const char* palette[] = {"#4c72b0", "#55a868", "#c44e52", "#8172b2"};
  std::vector<svg::Series> bars;
  for (std::size_t i = 0; i < models.size(); ++i) {
    svg::Series s{std::string(to_string(models[i])), {}, palette[i % 4]};
    for (const auto& p : portions) {
      const auto& ratios = exposures.at({models[i], p}).ratios;
      for (int k : c.k_levels) {
        auto it = ratios.find(k);
        s.values.push_back(it == ratios.end() ? 0.0 : it->second.percent);
      }
    }
    bars.push_back(std::move(s));
  }
  out.write("report/exposure.svg", svg::bar_chart("Transnational share of top-k% neighbours", columns, bars));

  manifest.record("report", {}, out.files(), false);
  result.outputs = out.files();
  return result;
}

}  // namespace

StageResult run_stage(const std::string& stage, const PipelineConfig& config, const StageOptions& options) {
  config.validate();
  fs::create_directories(config.out_dir);
  Manifest manifest(config.out_dir);
  if (stage == "ingest") return stage_ingest(config, manifest);
  if (stage == "align") return stage_align(config, manifest);
  if (stage == "classify") return stage_classify(config, manifest);
  if (stage == "build") return stage_build(config, manifest);
  if (stage == "stats") return stage_stats(config, manifest);
  if (stage == "train") return stage_train(config, options, manifest);
  if (stage == "expose") return stage_expose(config, options, manifest);
  if (stage == "report") return stage_report(config, options, manifest);
  throw Error("unknown stage '" + stage + "'");
}

std::vector<StageResult> run_all(const PipelineConfig& config, const StageOptions& options) {
  std::vector<StageResult> out;
  for (const char* stage : kStages) out.push_back(run_stage(stage, config, options));
  return out;
}

}  // namespace kgef
