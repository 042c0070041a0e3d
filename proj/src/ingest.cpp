#include "kgef/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kgef/isbn.hpp"

namespace kgef {

using nlohmann::json;

std::string_view to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::Author: return "authors";
    case RecordKind::Work: return "works";
    case RecordKind::Edition: return "editions";
  }
  return "?";
}

std::size_t ParsedFile::warning_count() const {
  return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const ParseIssue& i) {
    return i.level == ParseIssue::Level::Warning;
  }));
}

std::size_t IngestBatch::warning_count() const {
  return static_cast<std::size_t>(std::count_if(issues.begin(), issues.end(), [](const ParseIssue& i) {
    return i.level == ParseIssue::Level::Warning;
  }));
}

namespace {

struct SchemaViolation {
  std::string message;
};

// Typed access to one JSON object. The first violation throws SchemaViolation,
// which the line loop turns into a warning.
class FieldReader {
 public:
  explicit FieldReader(const json& object) : object_(object) {}

  std::string required_string(const char* key) {
    seen_.insert(key);
    auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) fail(std::string("missing required field '") + key + "'");
    if (!it->is_string()) fail(std::string("field '") + key + "' must be a string");
    std::string value = it->get<std::string>();
    if (trim(value).empty()) fail(std::string("field '") + key + "' must be non-empty");
    return value;
  }

  std::optional<std::string> optional_string(const char* key) {
    seen_.insert(key);
    auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) fail(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
  }

  std::optional<int> optional_int(const char* key) {
    seen_.insert(key);
    auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) return std::nullopt;
    if (it->is_number_integer()) {
      const auto v = it->get<std::int64_t>();
      if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        fail(std::string("field '") + key + "' is out of range");
      }
      return static_cast<int>(v);
    }
    if (it->is_number_unsigned()) fail(std::string("field '") + key + "' is out of range");
    fail(std::string("field '") + key + "' must be an integer");
  }

  std::vector<std::string> string_list(const char* key) {
    seen_.insert(key);
    std::vector<std::string> out;
    auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) return out;
    if (!it->is_array()) fail(std::string("field '") + key + "' must be a list of strings");
    for (const auto& item : *it) {
      if (!item.is_string()) fail(std::string("field '") + key + "' must be a list of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  std::map<Source, std::string> source_map(const char* key) {
    seen_.insert(key);
    std::map<Source, std::string> out;
    auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) return out;
    if (!it->is_object()) fail(std::string("field '") + key + "' must be an object");
    for (const auto& [k, v] : it->items()) {
      auto source = parse_source(k);
      if (!source) fail(std::string("field '") + key + "' has unknown source '" + k + "'");
      if (!v.is_string()) fail(std::string("field '") + key + "' values must be strings");
      out[*source] = v.get<std::string>();
    }
    return out;
  }

  std::map<std::string, Source> provenance_map(const char* key) {
    seen_.insert(key);
    std::map<std::string, Source> out;
    auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) return out;
    if (!it->is_object()) fail(std::string("field '") + key + "' must be an object");
    for (const auto& [k, v] : it->items()) {
      std::optional<Source> source = v.is_string() ? parse_source(v.get<std::string>()) : std::nullopt;
      if (!source) fail(std::string("field '") + key + "' values must be source codes");
      out[k] = *source;
    }
    return out;
  }

  void check_source(Source declared) {
    auto value = optional_string("source");
    if (!value) return;
    auto parsed = parse_source(*value);
    if (!parsed) fail("unknown source '" + *value + "'");
    if (*parsed != declared) {
      fail("record source '" + *value + "' differs from file source '" + std::string(to_string(declared)) + "'");
    }
  }

  std::vector<std::string> unknown_fields() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : object_.items()) {
      if (!seen_.count(k)) out.push_back(k);
    }
    return out;
  }

  [[noreturn]] static void fail(std::string message) { throw SchemaViolation{std::move(message)}; }

 private:
  const json& object_;
  std::set<std::string> seen_;
};

std::string normalized_isbn(const std::string& raw, std::vector<std::string>& notes) {
  std::string s = isbn::normalize(raw);
  if (!isbn::is_valid(s)) notes.push_back("invalid ISBN '" + raw + "' kept on record");
  return s;
}

RawAuthorRecord read_author(FieldReader& r, Source source, std::vector<std::string>&) {
  RawAuthorRecord rec;
  rec.source = source;
  r.check_source(source);
  rec.source_id = r.required_string("source_id");
  rec.name = r.required_string("name");
  rec.birth_year = r.optional_int("birth_year");
  if (rec.birth_year && (*rec.birth_year < kMinBirthYear || *rec.birth_year > kMaxBirthYear)) {
    FieldReader::fail("birth_year " + std::to_string(*rec.birth_year) + " outside [1000, 2100]");
  }
  rec.death_year = r.optional_int("death_year");
  rec.country_of_birth = r.optional_string("country_of_birth");
  rec.ethnic_group = r.optional_string("ethnic_group");
  if (auto g = r.optional_string("gender")) {
    rec.gender = parse_gender(*g);
    if (!rec.gender) FieldReader::fail("unknown gender '" + *g + "'");
  }
  rec.external_ids = r.source_map("external_ids");
  return rec;
}

RawWorkRecord read_work(FieldReader& r, Source source, std::vector<std::string>& notes) {
  RawWorkRecord rec;
  rec.source = source;
  r.check_source(source);
  rec.source_id = r.required_string("source_id");
  rec.title = r.required_string("title");
  rec.author_source_ids = r.string_list("author_source_ids");
  rec.language = r.optional_string("language");
  rec.subjects = r.string_list("subjects");
  rec.blurb = r.optional_string("blurb");
  rec.publish_year = r.optional_int("publish_year");
  for (const auto& raw : r.string_list("isbn_list")) rec.isbn_list.push_back(normalized_isbn(raw, notes));
  rec.filled_by = r.provenance_map("filled_by");
  return rec;
}

RawEditionRecord read_edition(FieldReader& r, Source source, std::vector<std::string>& notes) {
  RawEditionRecord rec;
  rec.source = source;
  r.check_source(source);
  rec.source_id = r.required_string("source_id");
  rec.work_source_id = r.required_string("work_source_id");
  rec.publisher = r.optional_string("publisher");
  rec.publish_year = r.optional_int("publish_year");
  rec.publish_country = r.optional_string("publish_country");
  if (auto raw = r.optional_string("isbn")) rec.isbn = normalized_isbn(*raw, notes);
  rec.filled_by = r.provenance_map("filled_by");
  return rec;
}

template <typename T, typename ReadFn>
Parsed<T> parse_lines(std::istream& in, Source source, ReadFn read) {
  Parsed<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json object = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (object.is_discarded() || !object.is_object()) {
      out.issues.push_back({ParseIssue::Level::Warning, {}, line_no, "not a JSON object"});
      continue;
    }
    try {
      FieldReader reader(object);
      std::vector<std::string> notes;
      T record = read(reader, source, notes);
      for (auto& note : notes) {
        out.issues.push_back({ParseIssue::Level::Warning, {}, line_no, std::move(note)});
      }
      for (const auto& field : reader.unknown_fields()) {
        out.issues.push_back({ParseIssue::Level::Debug, {}, line_no, "ignored unknown field '" + field + "'"});
      }
      out.records.push_back(std::move(record));
    } catch (const SchemaViolation& v) {
      out.issues.push_back({ParseIssue::Level::Warning, {}, line_no, v.message});
    } catch (const json::exception& e) {
      out.issues.push_back({ParseIssue::Level::Warning, {}, line_no, e.what()});
    }
  }
  return out;
}

void put_optional(json& j, const char* key, const std::optional<std::string>& v) {
  if (v) j[key] = *v;
}

void put_optional(json& j, const char* key, const std::optional<int>& v) {
  if (v) j[key] = *v;
}

void put_provenance(json& j, const std::map<std::string, Source>& filled_by) {
  if (filled_by.empty()) return;
  json obj = json::object();
  for (const auto& [field, source] : filled_by) obj[field] = std::string(to_string(source));
  j["filled_by"] = std::move(obj);
}

std::string dump_line(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

template <typename T>
ParsedFile wrap(RecordKind kind, Parsed<T> parsed, const std::string& file) {
  ParsedFile out;
  out.kind = kind;
  out.records.reserve(parsed.records.size());
  for (auto& r : parsed.records) out.records.emplace_back(std::move(r));
  out.issues = std::move(parsed.issues);
  for (auto& issue : out.issues) issue.file = file;
  return out;
}

}  // namespace

Parsed<RawAuthorRecord> parse_authors(std::istream& in, Source source) {
  return parse_lines<RawAuthorRecord>(in, source, read_author);
}

Parsed<RawWorkRecord> parse_works(std::istream& in, Source source) {
  return parse_lines<RawWorkRecord>(in, source, read_work);
}

Parsed<RawEditionRecord> parse_editions(std::istream& in, Source source) {
  return parse_lines<RawEditionRecord>(in, source, read_edition);
}

std::optional<RecordKind> kind_from_filename(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  const auto ends_with = [&](std::string_view suffix) {
    return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".authors.jsonl")) return RecordKind::Author;
  if (ends_with(".works.jsonl")) return RecordKind::Work;
  if (ends_with(".editions.jsonl")) return RecordKind::Edition;
  return std::nullopt;
}

ParsedFile parse_source_file(const std::filesystem::path& path, Source source) {
  auto kind = kind_from_filename(path);
  if (!kind) throw Error("cannot infer record kind from file name: " + path.string());
  return parse_source_file(path, source, *kind);
}

ParsedFile parse_source_file(const std::filesystem::path& path, Source source, RecordKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  const std::string file = path.filename().string();
  switch (kind) {
    case RecordKind::Author: return wrap(kind, parse_authors(in, source), file);
    case RecordKind::Work: return wrap(kind, parse_works(in, source), file);
    case RecordKind::Edition: return wrap(kind, parse_editions(in, source), file);
  }
  throw Error("unreachable record kind");
}

std::string to_json_line(const RawAuthorRecord& r) {
  json j;
  j["source_id"] = r.source_id;
  j["source"] = std::string(to_string(r.source));
  j["name"] = r.name;
  put_optional(j, "birth_year", r.birth_year);
  put_optional(j, "death_year", r.death_year);
  put_optional(j, "country_of_birth", r.country_of_birth);
  put_optional(j, "ethnic_group", r.ethnic_group);
  if (r.gender) j["gender"] = std::string(to_string(*r.gender));
  if (!r.external_ids.empty()) {
    json ids = json::object();
    for (const auto& [s, id] : r.external_ids) ids[std::string(to_string(s))] = id;
    j["external_ids"] = std::move(ids);
  }
  return dump_line(j);
}

std::string to_json_line(const RawWorkRecord& r) {
  json j;
  j["source_id"] = r.source_id;
  j["source"] = std::string(to_string(r.source));
  j["title"] = r.title;
  j["author_source_ids"] = r.author_source_ids;
  put_optional(j, "language", r.language);
  j["subjects"] = r.subjects;
  put_optional(j, "blurb", r.blurb);
  put_optional(j, "publish_year", r.publish_year);
  j["isbn_list"] = r.isbn_list;
  put_provenance(j, r.filled_by);
  return dump_line(j);
}

std::string to_json_line(const RawEditionRecord& r) {
  json j;
  j["source_id"] = r.source_id;
  j["source"] = std::string(to_string(r.source));
  j["work_source_id"] = r.work_source_id;
  put_optional(j, "publisher", r.publisher);
  put_optional(j, "publish_year", r.publish_year);
  put_optional(j, "publish_country", r.publish_country);
  put_optional(j, "isbn", r.isbn);
  put_provenance(j, r.filled_by);
  return dump_line(j);
}

BirthYearFilter filter_by_birth_year(std::vector<RawAuthorRecord> records, int cutoff) {
  BirthYearFilter out;
  out.kept.reserve(records.size());
  for (auto& r : records) {
    if (r.birth_year && *r.birth_year >= cutoff) {
      out.kept.push_back(std::move(r));
    } else {
      ++out.removed;
    }
  }
  return out;
}

namespace {

template <typename T>
void drop_duplicate_ids(std::vector<T>& records, Source source, RecordKind kind, std::vector<ParseIssue>& issues) {
  std::set<std::string> seen;
  std::vector<T> kept;
  kept.reserve(records.size());
  for (auto& r : records) {
    if (!seen.insert(r.source_id).second) {
      issues.push_back({ParseIssue::Level::Warning, source_file_name(source, kind).string(), 0,
                        "duplicate source_id '" + r.source_id + "' dropped"});
      continue;
    }
    kept.push_back(std::move(r));
  }
  records = std::move(kept);
}

}  // namespace

void validate_batch(IngestBatch& batch) {
  for (auto& [source, recs] : batch.sources) {
    drop_duplicate_ids(recs.authors, source, RecordKind::Author, batch.issues);
    drop_duplicate_ids(recs.works, source, RecordKind::Work, batch.issues);
    drop_duplicate_ids(recs.editions, source, RecordKind::Edition, batch.issues);

    std::set<std::string> work_ids;
    for (const auto& w : recs.works) work_ids.insert(w.source_id);
    std::erase_if(recs.editions, [&](const RawEditionRecord& e) {
      if (work_ids.count(e.work_source_id)) return false;
      batch.issues.push_back({ParseIssue::Level::Warning, source_file_name(source, RecordKind::Edition).string(), 0,
                              "edition '" + e.source_id + "' references unknown work '" + e.work_source_id + "'"});
      return true;
    });
  }
}

std::filesystem::path source_file_name(Source source, RecordKind kind) {
  return lowercase_ascii(to_string(source)) + "." + std::string(to_string(kind)) + ".jsonl";
}

IngestBatch ingest_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("source directory not found: " + dir.string());
  IngestBatch batch;
  for (Source source : kAllSources) {
    for (RecordKind kind : {RecordKind::Author, RecordKind::Work, RecordKind::Edition}) {
      const auto path = dir / source_file_name(source, kind);
      if (!std::filesystem::exists(path)) continue;
      ParsedFile parsed = parse_source_file(path, source, kind);
      auto& recs = batch.sources[source];
      for (auto& record : parsed.records) {
        std::visit(
            [&](auto&& r) {
              using T = std::decay_t<decltype(r)>;
              if constexpr (std::is_same_v<T, RawAuthorRecord>) recs.authors.push_back(std::move(r));
              if constexpr (std::is_same_v<T, RawWorkRecord>) recs.works.push_back(std::move(r));
              if constexpr (std::is_same_v<T, RawEditionRecord>) recs.editions.push_back(std::move(r));
            },
            record);
      }
      batch.issues.insert(batch.issues.end(), parsed.issues.begin(), parsed.issues.end());
    }
  }
  validate_batch(batch);
  return batch;
}

}  // namespace kgef
