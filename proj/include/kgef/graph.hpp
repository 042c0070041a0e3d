#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgef/align.hpp"
#include "kgef/classify.hpp"
#include "kgef/common.hpp"
#include "kgef/ingest.hpp"

namespace kgef {

enum class EntityKind {
  Author,
  Work,
  Edition,
  BirthSituation,
  Publication,
  Subject,
  Publisher,
  Place,
  TimeInterval,
};

inline constexpr EntityKind kAllEntityKinds[] = {
    EntityKind::Author,      EntityKind::Work,    EntityKind::Edition,
    EntityKind::BirthSituation, EntityKind::Publication, EntityKind::Subject,
    EntityKind::Publisher,   EntityKind::Place,   EntityKind::TimeInterval,
};

std::string_view to_string(EntityKind kind);

/// Closed relation vocabulary. Ontology counterparts noted where they exist.
enum class Relation {
  HasBirthSituation,   // Author -> BirthSituation
  BirthPlace,          // BirthSituation -> Place
  BirthTime,           // BirthSituation -> TimeInterval
  HasStatus,           // BirthSituation -> "Western" | "Transnational"
  AttributedTo,        // Work -> Author            (prov:wasAttributedTo)
  EmbodiedIn,          // Work -> Edition           (frbr:embodied)
  HasPublication,      // Edition -> Publication
  PublishedBy,         // Publication -> Publisher  (prov:wasAssociatedWith)
  PublicationYear,     // Publication -> literal year
  PublicationCountry,  // Publication -> Place
  HasSubject,          // Work -> Subject
  HasBlurb,            // Work -> literal
  Gender,              // Author -> literal
  SameAsExternal,      // Author -> literal "<source>:<id>"
};

inline constexpr Relation kAllRelations[] = {
    Relation::HasBirthSituation, Relation::BirthPlace,     Relation::BirthTime,
    Relation::HasStatus,         Relation::AttributedTo,   Relation::EmbodiedIn,
    Relation::HasPublication,    Relation::PublishedBy,    Relation::PublicationYear,
    Relation::PublicationCountry, Relation::HasSubject,    Relation::HasBlurb,
    Relation::Gender,            Relation::SameAsExternal,
};

std::string_view to_string(Relation relation);
std::optional<Relation> parse_relation(std::string_view text);

struct Object {
  std::string value;
  bool literal = false;

  auto operator<=>(const Object&) const = default;
};

struct Triple {
  std::string subject;
  Relation predicate;
  Object object;
  Source provenance;

  auto operator<=>(const Triple&) const = default;
};

/// Entity ids are "<kind-prefix>:<local>". The kind is recoverable from the
/// prefix, so the quad file alone determines the entity set.
namespace ids {
std::string author(std::string_view canonical_id);
std::string birth(std::string_view canonical_id);
std::string work(Source source, std::string_view source_id);
std::string edition(Source source, std::string_view source_id);
std::string publication(Source source, std::string_view edition_id);
std::string subject(std::string_view label);
std::string publisher(std::string_view label);
std::string place(std::string_view country_code);
std::string time(int year);
std::optional<EntityKind> kind_of(std::string_view id);
}  // namespace ids

/// Immutable typed triple graph. Entities are exactly the ids referenced by
/// triples; triples are kept sorted and unique.
class Graph {
 public:
  Graph() = default;

  /// Validates ids, predicate domain/range and literal positions; throws Error.
  static Graph from_triples(std::vector<Triple> triples);

  const std::map<std::string, EntityKind>& entities() const { return entities_; }
  std::span<const Triple> triples() const { return triples_; }
  std::size_t count(EntityKind kind) const;

  bool operator==(const Graph& other) const = default;

 private:
  std::map<std::string, EntityKind> entities_;
  std::vector<Triple> triples_;
};

/// Materializes the birth-situation and work/edition/publication patterns.
/// Throws Error naming the offending id on any dangling reference.
Graph build_graph(std::span<const AuthorEntity> authors, std::span<const StatusAssignment> assignments,
                  std::span<const RawWorkRecord> works, std::span<const RawEditionRecord> editions);

/// Double-quoted literal with \\, \", \t, \n, \r escapes (quad file object form).
std::string quote_literal(std::string_view value);

/// Quad lines `subject \t predicate \t object \t provenance`, sorted.
void serialize(const Graph& graph, std::ostream& out);
void serialize(const Graph& graph, const std::filesystem::path& path);
/// Throws Error with the line number of the first malformed line.
Graph deserialize(std::istream& in);
Graph deserialize(const std::filesystem::path& path);

struct ProvenanceCounts {
  std::size_t wikidata = 0;
  std::size_t external = 0;
  std::size_t total = 0;
};

struct GraphStats {
  std::map<EntityKind, ProvenanceCounts> entities;
  ProvenanceCounts blurbs;
};

/// Entities are attributed to the provenance of the statement that introduces
/// them (e.g. the attributedTo statement of a Work, the embodiedIn statement
/// of an Edition). An entity introduced by both WD and external statements
/// counts in both columns but once in the total.
GraphStats count_stats(const Graph& graph);

void write_graph_stats_csv(std::ostream& out, const GraphStats& stats);

/// Sub-graph of statements derived from `source`, plus Google Books statements
/// about entities already in that sub-graph.
Graph portion(const Graph& graph, Source source);

/// Pattern completeness findings (empty when the graph is well formed):
/// one BirthSituation per Author, one Publication per Edition, Edition
/// objects of embodiedIn.
std::vector<std::string> check_patterns(const Graph& graph);

}  // namespace kgef
