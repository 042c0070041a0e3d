#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kgef/common.hpp"

namespace kgef {

/// Writers born before this year are outside the collection.
inline constexpr int kBirthYearCutoff = 1808;
inline constexpr int kMinBirthYear = 1000;
inline constexpr int kMaxBirthYear = 2100;

enum class RecordKind { Author, Work, Edition };

std::string_view to_string(RecordKind kind);

struct RawAuthorRecord {
  std::string source_id;
  Source source = Source::WD;
  std::string name;
  std::optional<int> birth_year;
  std::optional<int> death_year;
  std::optional<std::string> country_of_birth;
  std::optional<std::string> ethnic_group;
  std::optional<Gender> gender;
  std::map<Source, std::string> external_ids;

  bool operator==(const RawAuthorRecord&) const = default;
};

struct RawWorkRecord {
  std::string source_id;
  Source source = Source::WD;
  std::string title;
  std::vector<std::string> author_source_ids;
  std::optional<std::string> language;
  std::vector<std::string> subjects;
  std::optional<std::string> blurb;
  std::optional<int> publish_year;
  std::vector<std::string> isbn_list;  // hyphen-stripped; invalid entries kept
  std::map<std::string, Source> filled_by;  // field name -> source that filled it

  bool operator==(const RawWorkRecord&) const = default;
};

struct RawEditionRecord {
  std::string source_id;
  Source source = Source::OL;
  std::string work_source_id;
  std::optional<std::string> publisher;
  std::optional<int> publish_year;
  std::optional<std::string> publish_country;
  std::optional<std::string> isbn;
  std::map<std::string, Source> filled_by;

  bool operator==(const RawEditionRecord&) const = default;
};

using Record = std::variant<RawAuthorRecord, RawWorkRecord, RawEditionRecord>;

struct ParseIssue {
  enum class Level { Debug, Warning };
  Level level = Level::Warning;
  std::string file;
  std::size_t line = 0;
  std::string message;
};

template <typename T>
struct Parsed {
  std::vector<T> records;
  std::vector<ParseIssue> issues;
};

struct ParsedFile {
  RecordKind kind = RecordKind::Author;
  std::vector<Record> records;
  std::vector<ParseIssue> issues;

  std::size_t warning_count() const;
};

// Line-delimited JSON readers. Every line is either one record or one
// warning; blank lines are skipped. Never throws on malformed content.
Parsed<RawAuthorRecord> parse_authors(std::istream& in, Source source);
Parsed<RawWorkRecord> parse_works(std::istream& in, Source source);
Parsed<RawEditionRecord> parse_editions(std::istream& in, Source source);

/// "<source>.<kind>.jsonl" -> kind, e.g. "ol.works.jsonl" -> Work.
std::optional<RecordKind> kind_from_filename(const std::filesystem::path& path);

/// Throws Error when the file cannot be read or its kind cannot be inferred
/// from the file name.
ParsedFile parse_source_file(const std::filesystem::path& path, Source source);
ParsedFile parse_source_file(const std::filesystem::path& path, Source source, RecordKind kind);

std::string to_json_line(const RawAuthorRecord& record);
std::string to_json_line(const RawWorkRecord& record);
std::string to_json_line(const RawEditionRecord& record);

struct BirthYearFilter {
  std::vector<RawAuthorRecord> kept;
  std::size_t removed = 0;
};

/// Keeps records with a known birth year >= cutoff, in input order.
BirthYearFilter filter_by_birth_year(std::vector<RawAuthorRecord> records,
                                     int cutoff = kBirthYearCutoff);

struct SourceRecords {
  std::vector<RawAuthorRecord> authors;
  std::vector<RawWorkRecord> works;
  std::vector<RawEditionRecord> editions;
};

/// All records of one ingest run, grouped by source.
struct IngestBatch {
  std::map<Source, SourceRecords> sources;
  std::vector<ParseIssue> issues;

  std::size_t warning_count() const;
};

/// Drops records whose (source, id) repeats an earlier one and editions whose
/// work is absent from the same source, recording a warning for each.
void validate_batch(IngestBatch& batch);

/// Reads every "<source>.<kind>.jsonl" file found in `dir` and validates the
/// result. Missing files are fine; an unreadable file throws.
IngestBatch ingest_directory(const std::filesystem::path& dir);

std::filesystem::path source_file_name(Source source, RecordKind kind);

}  // namespace kgef
