#include "kgef/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "kgef/text.hpp"

namespace kgef {

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Author: return "Author";
    case EntityKind::Work: return "Work";
    case EntityKind::Edition: return "Edition";
    case EntityKind::BirthSituation: return "BirthSituation";
    case EntityKind::Publication: return "Publication";
    case EntityKind::Subject: return "Subject";
    case EntityKind::Publisher: return "Publisher";
    case EntityKind::Place: return "Place";
    case EntityKind::TimeInterval: return "TimeInterval";
  }
  return "?";
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::HasBirthSituation: return "hasBirthSituation";
    case Relation::BirthPlace: return "birthPlace";
    case Relation::BirthTime: return "birthTime";
    case Relation::HasStatus: return "hasStatus";
    case Relation::AttributedTo: return "attributedTo";
    case Relation::EmbodiedIn: return "embodiedIn";
    case Relation::HasPublication: return "hasPublication";
    case Relation::PublishedBy: return "publishedBy";
    case Relation::PublicationYear: return "publicationYear";
    case Relation::PublicationCountry: return "publicationCountry";
    case Relation::HasSubject: return "hasSubject";
    case Relation::HasBlurb: return "hasBlurb";
    case Relation::Gender: return "gender";
    case Relation::SameAsExternal: return "sameAsExternal";
  }
  return "?";
}

std::optional<Relation> parse_relation(std::string_view text) {
  for (Relation r : kAllRelations) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

namespace {

struct Signature {
  EntityKind domain;
  std::optional<EntityKind> range;  // nullopt: literal object
};

Signature signature(Relation r) {
  switch (r) {
    case Relation::HasBirthSituation: return {EntityKind::Author, EntityKind::BirthSituation};
    case Relation::BirthPlace: return {EntityKind::BirthSituation, EntityKind::Place};
    case Relation::BirthTime: return {EntityKind::BirthSituation, EntityKind::TimeInterval};
    case Relation::HasStatus: return {EntityKind::BirthSituation, std::nullopt};
    case Relation::AttributedTo: return {EntityKind::Work, EntityKind::Author};
    case Relation::EmbodiedIn: return {EntityKind::Work, EntityKind::Edition};
    case Relation::HasPublication: return {EntityKind::Edition, EntityKind::Publication};
    case Relation::PublishedBy: return {EntityKind::Publication, EntityKind::Publisher};
    case Relation::PublicationYear: return {EntityKind::Publication, std::nullopt};
    case Relation::PublicationCountry: return {EntityKind::Publication, EntityKind::Place};
    case Relation::HasSubject: return {EntityKind::Work, EntityKind::Subject};
    case Relation::HasBlurb: return {EntityKind::Work, std::nullopt};
    case Relation::Gender: return {EntityKind::Author, std::nullopt};
    case Relation::SameAsExternal: return {EntityKind::Author, std::nullopt};
  }
  throw Error("unknown relation");
}

constexpr std::pair<EntityKind, std::string_view> kPrefixes[] = {
    {EntityKind::Author, "author"},       {EntityKind::Work, "work"},
    {EntityKind::Edition, "edition"},     {EntityKind::BirthSituation, "birth"},
    {EntityKind::Publication, "publication"}, {EntityKind::Subject, "subject"},
    {EntityKind::Publisher, "publisher"}, {EntityKind::Place, "place"},
    {EntityKind::TimeInterval, "time"},
};

std::string prefix_of(EntityKind kind) {
  for (const auto& [k, p] : kPrefixes) {
    if (k == kind) return std::string(p);
  }
  return "?";
}

// Percent-escapes the characters that would break the quad line format.
std::string escape_local(std::string_view local) {
  std::string out;
  for (char c : local) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '%' || c == '"' || u <= 0x20 || u == 0x7f) {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", u);
      out += buf;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string make_id(EntityKind kind, std::string_view local) {
  return prefix_of(kind) + ":" + escape_local(local);
}

}  // namespace

namespace ids {

std::string author(std::string_view canonical_id) { return make_id(EntityKind::Author, canonical_id); }
std::string birth(std::string_view canonical_id) { return make_id(EntityKind::BirthSituation, canonical_id); }

std::string work(Source source, std::string_view source_id) {
  return make_id(EntityKind::Work, std::string(to_string(source)) + ":" + std::string(source_id));
}

std::string edition(Source source, std::string_view source_id) {
  return make_id(EntityKind::Edition, std::string(to_string(source)) + ":" + std::string(source_id));
}

std::string publication(Source source, std::string_view edition_id) {
  return make_id(EntityKind::Publication, std::string(to_string(source)) + ":" + std::string(edition_id));
}

std::string subject(std::string_view label) { return make_id(EntityKind::Subject, normalize_name(label)); }
std::string publisher(std::string_view label) { return make_id(EntityKind::Publisher, normalize_name(label)); }

std::string place(std::string_view country_code) {
  std::string code = trim(country_code);
  for (char& c : code) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return make_id(EntityKind::Place, code);
}

std::string time(int year) { return make_id(EntityKind::TimeInterval, std::to_string(year)); }

std::optional<EntityKind> kind_of(std::string_view id) {
  const auto colon = id.find(':');
  if (colon == std::string_view::npos || colon + 1 == id.size()) return std::nullopt;
  const std::string_view prefix = id.substr(0, colon);
  for (const auto& [k, p] : kPrefixes) {
    if (p == prefix) return k;
  }
  return std::nullopt;
}

}  // namespace ids

Graph Graph::from_triples(std::vector<Triple> triples) {
  Graph g;
  const auto bad_id = [](const std::string& id) {
    return id.find_first_of("\t\n\r\" ") != std::string::npos;
  };
  for (const auto& t : triples) {
    const Signature sig = signature(t.predicate);
    const auto subject_kind = ids::kind_of(t.subject);
    if (!subject_kind || bad_id(t.subject)) throw Error("malformed subject id '" + t.subject + "'");
    if (*subject_kind != sig.domain) {
      throw Error("subject '" + t.subject + "' is not a valid " + std::string(to_string(t.predicate)) + " domain");
    }
    g.entities_.emplace(t.subject, *subject_kind);
    if (t.object.literal) {
      if (sig.range) throw Error(std::string(to_string(t.predicate)) + " requires an entity object");
      continue;
    }
    if (!sig.range) throw Error(std::string(to_string(t.predicate)) + " requires a literal object");
    const auto object_kind = ids::kind_of(t.object.value);
    if (!object_kind || bad_id(t.object.value)) throw Error("malformed object id '" + t.object.value + "'");
    if (*object_kind != *sig.range) {
      throw Error("object '" + t.object.value + "' is not a valid " + std::string(to_string(t.predicate)) + " range");
    }
    g.entities_.emplace(t.object.value, *object_kind);
  }
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  g.triples_ = std::move(triples);
  return g;
}

std::size_t Graph::count(EntityKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(entities_.begin(), entities_.end(), [&](const auto& e) { return e.second == kind; }));
}

Graph build_graph(std::span<const AuthorEntity> authors, std::span<const StatusAssignment> assignments,
                  std::span<const RawWorkRecord> works, std::span<const RawEditionRecord> editions) {
  std::vector<Triple> out;
  const auto add = [&](std::string s, Relation p, std::string o, bool literal, Source prov) {
    out.push_back({std::move(s), p, {std::move(o), literal}, prov});
  };

  std::map<std::pair<Source, std::string>, std::string> author_index;
  for (const auto& a : authors) {
    for (const auto& [source, id] : a.cross_ids) {
      auto [it, inserted] = author_index.emplace(std::pair{source, id}, a.canonical_id);
      if (!inserted && it->second != a.canonical_id) {
        throw Error("external id " + std::string(to_string(source)) + ":" + id + " shared by " + it->second +
                    " and " + a.canonical_id);
      }
    }
  }

  std::map<std::string, Status> status;
  for (const auto& s : assignments) {
    if (!author_index.count({Source::WD, s.canonical_id})) {
      throw Error("status assignment references unknown author " + s.canonical_id);
    }
    status[s.canonical_id] = s.status;
  }

  for (const auto& a : authors) {
    const std::string author = ids::author(a.canonical_id);
    const std::string birth = ids::birth(a.canonical_id);
    add(author, Relation::HasBirthSituation, birth, false, Source::WD);
    if (a.country_of_birth && !trim(*a.country_of_birth).empty()) {
      add(birth, Relation::BirthPlace, ids::place(*a.country_of_birth), false, Source::WD);
    }
    add(birth, Relation::BirthTime, ids::time(a.birth_year), false, Source::WD);
    if (auto it = status.find(a.canonical_id); it != status.end()) {
      add(birth, Relation::HasStatus, std::string(to_string(it->second)), true, Source::WD);
    }
    if (a.gender) add(author, Relation::Gender, std::string(to_string(*a.gender)), true, Source::WD);
    for (const auto& [source, id] : a.cross_ids) {
      if (source == Source::WD) continue;
      add(author, Relation::SameAsExternal, std::string(to_string(source)) + ":" + id, true, source);
    }
  }

  const auto provenance = [](const std::map<std::string, Source>& filled_by, const char* field, Source fallback) {
    auto it = filled_by.find(field);
    return it == filled_by.end() ? fallback : it->second;
  };

  std::set<std::pair<Source, std::string>> work_keys;
  for (const auto& w : works) {
    const std::string work = ids::work(w.source, w.source_id);
    if (!work_keys.emplace(w.source, w.source_id).second) throw Error("duplicate work " + work);
    if (w.author_source_ids.empty()) throw Error("work " + work + " has no author");
    for (const auto& aid : w.author_source_ids) {
      auto it = author_index.find({w.source, aid});
      if (it == author_index.end()) {
        throw Error("work " + work + " references unknown author " + std::string(to_string(w.source)) + ":" + aid);
      }
      add(work, Relation::AttributedTo, ids::author(it->second), false, w.source);
    }
    const Source subject_source = provenance(w.filled_by, "subjects", w.source);
    for (const auto& s : w.subjects) {
      if (trim(s).empty()) continue;
      add(work, Relation::HasSubject, ids::subject(s), false, subject_source);
    }
    if (w.blurb && !w.blurb->empty()) {
      add(work, Relation::HasBlurb, *w.blurb, true, provenance(w.filled_by, "blurb", w.source));
    }
  }

  for (const auto& e : editions) {
    if (!work_keys.count({e.source, e.work_source_id})) {
      throw Error("edition " + e.source_id + " references unknown work " + std::string(to_string(e.source)) + ":" +
                  e.work_source_id);
    }
    const std::string edition = ids::edition(e.source, e.source_id);
    const std::string publication = ids::publication(e.source, e.source_id);
    add(ids::work(e.source, e.work_source_id), Relation::EmbodiedIn, edition, false, e.source);
    add(edition, Relation::HasPublication, publication, false, e.source);
    if (e.publisher && !trim(*e.publisher).empty()) {
      add(publication, Relation::PublishedBy, ids::publisher(*e.publisher), false, e.source);
    }
    if (e.publish_year) {
      add(publication, Relation::PublicationYear, std::to_string(*e.publish_year), true,
          provenance(e.filled_by, "publish_year", e.source));
    }
    if (e.publish_country && !trim(*e.publish_country).empty()) {
      add(publication, Relation::PublicationCountry, ids::place(*e.publish_country), false, e.source);
    }
  }

  return Graph::from_triples(std::move(out));
}

std::string quote_literal(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

namespace {

std::optional<std::string> unquote_literal(std::string_view field) {
  if (field.size() < 2 || field.front() != '"' || field.back() != '"') return std::nullopt;
  std::string out;
  for (std::size_t i = 1; i + 1 < field.size(); ++i) {
    char c = field[i];
    if (c == '"') return std::nullopt;
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i + 2 >= field.size()) return std::nullopt;
    switch (field[++i]) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: return std::nullopt;
    }
  }
  return out;
}

}  // namespace

void serialize(const Graph& graph, std::ostream& out) {
  for (const auto& t : graph.triples()) {
    out << t.subject << '\t' << to_string(t.predicate) << '\t'
        << (t.object.literal ? quote_literal(t.object.value) : t.object.value) << '\t' << to_string(t.provenance)
        << '\n';
  }
}

void serialize(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  serialize(graph, out);
}

Graph deserialize(std::istream& in) {
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fail = [&](const std::string& why) -> Error {
      return Error("quad line " + std::to_string(line_no) + ": " + why);
    };
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find('\t')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 4) throw fail("expected 4 tab-separated fields");

    Triple t;
    t.subject = std::string(fields[0]);
    auto predicate = parse_relation(fields[1]);
    if (!predicate) throw fail("unknown predicate '" + std::string(fields[1]) + "'");
    t.predicate = *predicate;
    if (!fields[2].empty() && fields[2].front() == '"') {
      auto literal = unquote_literal(fields[2]);
      if (!literal) throw fail("malformed literal");
      t.object = {std::move(*literal), true};
    } else {
      t.object = {std::string(fields[2]), false};
    }
    auto provenance = parse_source(fields[3]);
    if (!provenance || fields[3] != to_string(*provenance)) throw fail("unknown provenance '" + std::string(fields[3]) + "'");
    t.provenance = *provenance;
    triples.push_back(std::move(t));

    try {
      Graph::from_triples({triples.back()});
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  return Graph::from_triples(std::move(triples));
}

Graph deserialize(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return deserialize(in);
}

GraphStats count_stats(const Graph& graph) {
  std::map<std::string, std::set<Source>> introduced_by;
  GraphStats stats;
  for (const auto& t : graph.triples()) {
    if (t.predicate == Relation::HasBirthSituation) introduced_by[t.subject].insert(t.provenance);
    if (t.predicate == Relation::AttributedTo) introduced_by[t.subject].insert(t.provenance);
    if (!t.object.literal && t.predicate != Relation::AttributedTo) introduced_by[t.object.value].insert(t.provenance);
    if (t.predicate == Relation::HasBlurb) {
      (t.provenance == Source::WD ? stats.blurbs.wikidata : stats.blurbs.external) += 1;
      ++stats.blurbs.total;
    }
  }
  for (EntityKind kind : kAllEntityKinds) stats.entities[kind];
  for (const auto& [id, kind] : graph.entities()) {
    auto& counts = stats.entities[kind];
    ++counts.total;
    auto it = introduced_by.find(id);
    if (it == introduced_by.end()) continue;
    if (it->second.count(Source::WD)) ++counts.wikidata;
    if (std::any_of(it->second.begin(), it->second.end(), [](Source s) { return s != Source::WD; })) {
      ++counts.external;
    }
  }
  return stats;
}

void write_graph_stats_csv(std::ostream& out, const GraphStats& stats) {
  out << "entity_type,wikidata,external,total\n";
  for (const auto& [kind, c] : stats.entities) {
    out << to_string(kind) << ',' << c.wikidata << ',' << c.external << ',' << c.total << '\n';
  }
  out << "Blurb," << stats.blurbs.wikidata << ',' << stats.blurbs.external << ',' << stats.blurbs.total << '\n';
}

Graph portion(const Graph& graph, Source source) {
  std::vector<Triple> kept;
  std::set<std::string> members;
  for (const auto& t : graph.triples()) {
    if (t.provenance != source) continue;
    kept.push_back(t);
    members.insert(t.subject);
    if (!t.object.literal) members.insert(t.object.value);
  }
  if (source != Source::GB) {
    for (const auto& t : graph.triples()) {
      if (t.provenance == Source::GB && members.count(t.subject)) kept.push_back(t);
    }
  }
  return Graph::from_triples(std::move(kept));
}

std::vector<std::string> check_patterns(const Graph& graph) {
  std::map<std::string, std::size_t> births, publications, embodiments, attributions;
  std::vector<std::string> findings;
  for (const auto& t : graph.triples()) {
    switch (t.predicate) {
      case Relation::HasBirthSituation: ++births[t.subject]; break;
      case Relation::HasPublication: ++publications[t.subject]; break;
      case Relation::EmbodiedIn:
        ++embodiments[t.object.value];
        if (ids::kind_of(t.object.value) != EntityKind::Edition) {
          findings.push_back("embodiedIn object " + t.object.value + " is not an Edition");
        }
        break;
      case Relation::AttributedTo: ++attributions[t.subject]; break;
      default: break;
    }
  }
  for (const auto& [id, kind] : graph.entities()) {
    if (kind == EntityKind::Author && births[id] != 1) {
      findings.push_back("author " + id + " has " + std::to_string(births[id]) + " birth situations");
    }
    if (kind == EntityKind::Edition && publications[id] != 1) {
      findings.push_back("edition " + id + " has " + std::to_string(publications[id]) + " publications");
    }
    if (kind == EntityKind::Edition && embodiments[id] != 1) {
      findings.push_back("edition " + id + " embodies " + std::to_string(embodiments[id]) + " works");
    }
    if (kind == EntityKind::Work && attributions[id] == 0) findings.push_back("work " + id + " has no author");
  }
  return findings;
}

}  // namespace kgef
