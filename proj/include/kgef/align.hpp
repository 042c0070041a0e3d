#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgef/common.hpp"
#include "kgef/ingest.hpp"

namespace kgef {

struct AlignmentKey {
  std::string normalized_name;
  std::optional<int> birth_year;

  bool operator==(const AlignmentKey&) const = default;
};

AlignmentKey alignment_key(const RawAuthorRecord& author);

enum class UnmatchedReason { NoNameMatch, NoBirthYear, YearMismatch, Ambiguous };

std::string_view to_string(UnmatchedReason reason);

struct MatchPair {
  std::string wd_id;
  std::string matched_id;

  auto operator<=>(const MatchPair&) const = default;
};

struct Unmatched {
  std::string wd_id;
  UnmatchedReason reason;

  auto operator<=>(const Unmatched&) const = default;
};

/// Output of one matcher. Both lists are sorted by wd_id, so the result does
/// not depend on input order.
struct MatchResult {
  Source matched_source = Source::OL;
  std::vector<MatchPair> pairs;
  std::vector<Unmatched> unmatched;
};

/// Exact normalized-name match plus equal, known birth years. A WD author is
/// linked only when exactly one OL id qualifies and that OL id qualifies for
/// no other WD author.
MatchResult match_openlibrary(std::span<const RawAuthorRecord> wd_authors,
                              std::span<const RawAuthorRecord> ol_authors);

/// Goodreads names that occur more than once are discarded first; the rest are
/// matched on normalized name alone. A GR name matching several WD authors
/// links none of them.
MatchResult match_goodreads(std::span<const RawAuthorRecord> wd_authors,
                            std::span<const RawAuthorRecord> gr_authors);

/// Canonical author. Wikidata values are authoritative for biographical fields.
struct AuthorEntity {
  std::string canonical_id;
  std::string name;
  int birth_year = 0;
  std::map<Source, std::string> cross_ids;
  std::optional<std::string> country_of_birth;
  std::optional<std::string> ethnic_group;
  std::optional<Gender> gender;
  std::optional<int> death_year;
  /// Source whose works are collected for this author: OL when linked to
  /// OpenLibrary, else GR when linked to Goodreads, else none (WD works only).
  std::optional<Source> work_source;

  bool operator==(const AuthorEntity&) const = default;
};

/// Builds one entity per WD author. OL ids take precedence for work
/// collection; GR ids of OL-linked authors stay in cross_ids as metadata.
/// Output sorted by canonical_id.
std::vector<AuthorEntity> resolve_precedence(std::span<const RawAuthorRecord> wd_authors,
                                             const MatchResult& ol_pairs,
                                             const MatchResult& gr_pairs);

struct IsbnJoinStats {
  std::size_t blurbs = 0;
  std::size_t subjects = 0;
  std::size_t years = 0;
  std::size_t ambiguous_isbns = 0;
};

/// Fills missing blurb/subjects/publish_year of works (and publish_year of
/// editions) from Google Books records sharing a valid ISBN, compared in
/// ISBN-13 form. Present fields are never overwritten; every fill is recorded
/// in filled_by. An ISBN claimed by several GB records is skipped.
IsbnJoinStats join_isbn(std::vector<RawWorkRecord>& works,
                        std::vector<RawEditionRecord>& editions,
                        std::span<const RawWorkRecord> gb_records);

struct WorkSelection {
  std::vector<RawWorkRecord> works;
  std::vector<RawEditionRecord> editions;
  std::size_t dropped_works = 0;
};

/// Collection policy: WD works of every author, plus OL or GR works of the
/// authors whose work_source is that source. Author ids not linked to an
/// entity are removed from kept works; works left without authors are dropped.
WorkSelection select_works(std::span<const AuthorEntity> authors, const IngestBatch& batch);

/// CSV `wd_id,matched_source,matched_id,reason`, one row per WD author and
/// matcher, sorted.
void write_alignment_report(std::ostream& out, const MatchResult& ol, const MatchResult& gr);

nlohmann::json to_json(const AuthorEntity& author);
AuthorEntity author_from_json(const nlohmann::json& j);

}  // namespace kgef
