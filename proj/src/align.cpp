#include "kgef/align.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <tuple>

#include "kgef/isbn.hpp"
#include "kgef/text.hpp"

namespace kgef {

using nlohmann::json;

AlignmentKey alignment_key(const RawAuthorRecord& author) {
  return {normalize_name(author.name), author.birth_year};
}

std::string_view to_string(UnmatchedReason reason) {
  switch (reason) {
    case UnmatchedReason::NoNameMatch: return "no-name-match";
    case UnmatchedReason::NoBirthYear: return "no-birth-year";
    case UnmatchedReason::YearMismatch: return "year-mismatch";
    case UnmatchedReason::Ambiguous: return "ambiguous";
  }
  return "?";
}

namespace {

using NameIndex = std::map<std::string, std::vector<const RawAuthorRecord*>>;

NameIndex index_by_name(std::span<const RawAuthorRecord> authors) {
  NameIndex index;
  for (const auto& a : authors) index[normalize_name(a.name)].push_back(&a);
  return index;
}

// Tentative links are confirmed only when the external id is claimed by a
// single WD author; otherwise every claimant becomes ambiguous.
MatchResult finalize(Source source, std::map<std::string, std::string> tentative,
                     std::vector<Unmatched> unmatched) {
  std::map<std::string, std::size_t> claims;
  for (const auto& [wd, ext] : tentative) ++claims[ext];

  MatchResult out;
  out.matched_source = source;
  for (const auto& [wd, ext] : tentative) {
    if (claims[ext] == 1) {
      out.pairs.push_back({wd, ext});
    } else {
      unmatched.push_back({wd, UnmatchedReason::Ambiguous});
    }
  }
  std::sort(unmatched.begin(), unmatched.end());
  out.unmatched = std::move(unmatched);
  return out;
}

}  // namespace

MatchResult match_openlibrary(std::span<const RawAuthorRecord> wd_authors,
                              std::span<const RawAuthorRecord> ol_authors) {
  const NameIndex by_name = index_by_name(ol_authors);
  std::map<std::string, std::string> tentative;
  std::vector<Unmatched> unmatched;

  for (const auto& wd : wd_authors) {
    auto it = by_name.find(normalize_name(wd.name));
    if (it == by_name.end()) {
      unmatched.push_back({wd.source_id, UnmatchedReason::NoNameMatch});
      continue;
    }
    if (!wd.birth_year) {
      unmatched.push_back({wd.source_id, UnmatchedReason::NoBirthYear});
      continue;
    }
    std::set<std::string> qualifying;
    bool any_year = false;
    for (const RawAuthorRecord* ol : it->second) {
      if (!ol->birth_year) continue;
      any_year = true;
      if (*ol->birth_year == *wd.birth_year) qualifying.insert(ol->source_id);
    }
    if (qualifying.empty()) {
      unmatched.push_back({wd.source_id, any_year ? UnmatchedReason::YearMismatch : UnmatchedReason::NoBirthYear});
    } else if (qualifying.size() > 1) {
      unmatched.push_back({wd.source_id, UnmatchedReason::Ambiguous});
    } else {
      tentative.emplace(wd.source_id, *qualifying.begin());
    }
  }
  return finalize(Source::OL, std::move(tentative), std::move(unmatched));
}

MatchResult match_goodreads(std::span<const RawAuthorRecord> wd_authors,
                            std::span<const RawAuthorRecord> gr_authors) {
  const NameIndex by_name = index_by_name(gr_authors);
  std::map<std::string, std::string> tentative;
  std::vector<Unmatched> unmatched;

  for (const auto& wd : wd_authors) {
    auto it = by_name.find(normalize_name(wd.name));
    if (it == by_name.end()) {
      unmatched.push_back({wd.source_id, UnmatchedReason::NoNameMatch});
    } else if (it->second.size() > 1) {
      // Homonym on the Goodreads side: the name was filtered out.
      unmatched.push_back({wd.source_id, UnmatchedReason::Ambiguous});
    } else {
      tentative.emplace(wd.source_id, it->second.front()->source_id);
    }
  }
  return finalize(Source::GR, std::move(tentative), std::move(unmatched));
}

std::vector<AuthorEntity> resolve_precedence(std::span<const RawAuthorRecord> wd_authors,
                                             const MatchResult& ol_pairs,
                                             const MatchResult& gr_pairs) {
  std::map<std::string, std::string> ol_ids, gr_ids;
  for (const auto& p : ol_pairs.pairs) ol_ids[p.wd_id] = p.matched_id;
  for (const auto& p : gr_pairs.pairs) gr_ids[p.wd_id] = p.matched_id;

  std::vector<AuthorEntity> out;
  out.reserve(wd_authors.size());
  for (const auto& wd : wd_authors) {
    if (!wd.birth_year) throw Error("Wikidata author " + wd.source_id + " has no birth year");
    AuthorEntity e;
    e.canonical_id = wd.source_id;
    e.name = wd.name;
    e.birth_year = *wd.birth_year;
    e.death_year = wd.death_year;
    e.country_of_birth = wd.country_of_birth;
    e.ethnic_group = wd.ethnic_group;
    e.gender = wd.gender;
    e.cross_ids[Source::WD] = wd.source_id;
    if (auto it = ol_ids.find(wd.source_id); it != ol_ids.end()) {
      e.cross_ids[Source::OL] = it->second;
      e.work_source = Source::OL;
    }
    if (auto it = gr_ids.find(wd.source_id); it != gr_ids.end()) {
      e.cross_ids[Source::GR] = it->second;
      if (!e.work_source) e.work_source = Source::GR;
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(),
            [](const AuthorEntity& a, const AuthorEntity& b) { return a.canonical_id < b.canonical_id; });
  return out;
}

namespace {

bool missing(const std::optional<std::string>& v) { return !v || v->empty(); }

}  // namespace

IsbnJoinStats join_isbn(std::vector<RawWorkRecord>& works,
                        std::vector<RawEditionRecord>& editions,
                        std::span<const RawWorkRecord> gb_records) {
  IsbnJoinStats stats;
  std::map<std::string, std::set<std::size_t>> claims;
  for (std::size_t i = 0; i < gb_records.size(); ++i) {
    for (const auto& raw : gb_records[i].isbn_list) {
      if (auto canonical = isbn::to_isbn13(raw)) claims[*canonical].insert(i);
    }
  }
  std::map<std::string, const RawWorkRecord*> index;
  for (const auto& [code, owners] : claims) {
    if (owners.size() == 1) {
      index[code] = &gb_records[*owners.begin()];
    } else {
      ++stats.ambiguous_isbns;
    }
  }
  const auto lookup = [&](const std::string& raw) -> const RawWorkRecord* {
    auto canonical = isbn::to_isbn13(raw);
    if (!canonical) return nullptr;
    auto it = index.find(*canonical);
    return it == index.end() ? nullptr : it->second;
  };

  for (auto& work : works) {
    for (const auto& raw : work.isbn_list) {
      const RawWorkRecord* gb = lookup(raw);
      if (!gb) continue;
      if (missing(work.blurb) && !missing(gb->blurb)) {
        work.blurb = gb->blurb;
        work.filled_by["blurb"] = Source::GB;
        ++stats.blurbs;
      }
      if (work.subjects.empty() && !gb->subjects.empty()) {
        work.subjects = gb->subjects;
        work.filled_by["subjects"] = Source::GB;
        ++stats.subjects;
      }
      if (!work.publish_year && gb->publish_year) {
        work.publish_year = gb->publish_year;
        work.filled_by["publish_year"] = Source::GB;
        ++stats.years;
      }
    }
  }
  for (auto& edition : editions) {
    if (!edition.isbn || edition.publish_year) continue;
    const RawWorkRecord* gb = lookup(*edition.isbn);
    if (gb && gb->publish_year) {
      edition.publish_year = gb->publish_year;
      edition.filled_by["publish_year"] = Source::GB;
      ++stats.years;
    }
  }
  return stats;
}

WorkSelection select_works(std::span<const AuthorEntity> authors, const IngestBatch& batch) {
  // (source, source-side author id) -> collected
  std::set<std::pair<Source, std::string>> linked;
  for (const auto& a : authors) {
    linked.emplace(Source::WD, a.canonical_id);
    if (a.work_source) linked.emplace(*a.work_source, a.cross_ids.at(*a.work_source));
  }

  WorkSelection out;
  for (Source source : {Source::WD, Source::OL, Source::GR}) {
    auto it = batch.sources.find(source);
    if (it == batch.sources.end()) continue;
    std::set<std::string> kept_ids;
    for (const auto& work : it->second.works) {
      RawWorkRecord copy = work;
      std::erase_if(copy.author_source_ids,
                    [&](const std::string& id) { return !linked.count({source, id}); });
      if (copy.author_source_ids.empty()) {
        ++out.dropped_works;
        continue;
      }
      kept_ids.insert(copy.source_id);
      out.works.push_back(std::move(copy));
    }
    for (const auto& edition : it->second.editions) {
      if (kept_ids.count(edition.work_source_id)) out.editions.push_back(edition);
    }
  }
  return out;
}

void write_alignment_report(std::ostream& out, const MatchResult& ol, const MatchResult& gr) {
  using Row = std::tuple<std::string, std::string, std::string, std::string>;
  std::vector<Row> rows;
  for (const MatchResult* result : {&ol, &gr}) {
    const std::string source(to_string(result->matched_source));
    for (const auto& p : result->pairs) rows.emplace_back(p.wd_id, source, p.matched_id, "matched");
    for (const auto& u : result->unmatched) rows.emplace_back(u.wd_id, source, "", std::string(to_string(u.reason)));
  }
  std::sort(rows.begin(), rows.end());
  out << "wd_id,matched_source,matched_id,reason\n";
  for (const auto& [wd, source, id, reason] : rows) {
    out << csv_escape(wd) << ',' << source << ',' << csv_escape(id) << ',' << reason << '\n';
  }
}

json to_json(const AuthorEntity& a) {
  json j;
  j["canonical_id"] = a.canonical_id;
  j["name"] = a.name;
  j["birth_year"] = a.birth_year;
  json ids = json::object();
  for (const auto& [s, id] : a.cross_ids) ids[std::string(to_string(s))] = id;
  j["cross_ids"] = std::move(ids);
  if (a.country_of_birth) j["country_of_birth"] = *a.country_of_birth;
  if (a.ethnic_group) j["ethnic_group"] = *a.ethnic_group;
  if (a.gender) j["gender"] = std::string(to_string(*a.gender));
  if (a.death_year) j["death_year"] = *a.death_year;
  if (a.work_source) j["work_source"] = std::string(to_string(*a.work_source));
  return j;
}

AuthorEntity author_from_json(const json& j) {
  AuthorEntity a;
  a.canonical_id = j.at("canonical_id").get<std::string>();
  a.name = j.at("name").get<std::string>();
  a.birth_year = j.at("birth_year").get<int>();
  for (const auto& [k, v] : j.at("cross_ids").items()) {
    auto source = parse_source(k);
    if (!source) throw Error("unknown source in cross_ids: " + k);
    a.cross_ids[*source] = v.get<std::string>();
  }
  if (j.contains("country_of_birth")) a.country_of_birth = j["country_of_birth"].get<std::string>();
  if (j.contains("ethnic_group")) a.ethnic_group = j["ethnic_group"].get<std::string>();
  if (j.contains("gender")) a.gender = parse_gender(j["gender"].get<std::string>());
  if (j.contains("death_year")) a.death_year = j["death_year"].get<int>();
  if (j.contains("work_source")) a.work_source = parse_source(j["work_source"].get<std::string>());
  return a;
}

}  // namespace kgef
