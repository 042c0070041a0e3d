#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "kgef/align.hpp"
#include "kgef/common.hpp"

namespace kgef {

enum class CountryClass { Western, FormerColony };

/// Country code -> class. Loaded from `country_code,class` CSV; lines starting
/// with '#' form the provenance note.
struct CountryTaxonomy {
  std::map<std::string, CountryClass> classes;
  std::string provenance_note;

  static CountryTaxonomy parse(std::istream& in);
  static CountryTaxonomy load(const std::filesystem::path& path);
};

/// Country code -> case-folded ethnic group names considered minorities there.
using MinorityMap = std::map<std::string, std::set<std::string>>;

MinorityMap parse_minorities(std::istream& in);
MinorityMap load_minorities(const std::filesystem::path& path);

enum class Status { Western, Transnational };
enum class Basis { BirthCountry, EthnicMinority };
enum class Generation { Silent, Boomer, GenX, Millennial, Other };

std::string_view to_string(Status status);
std::string_view to_string(Basis basis);
std::string_view to_string(Generation generation);
std::optional<Status> parse_status(std::string_view text);
std::optional<Basis> parse_basis(std::string_view text);
std::optional<Generation> parse_generation(std::string_view text);

struct StatusAssignment {
  std::string canonical_id;
  Status status = Status::Western;
  Basis basis = Basis::BirthCountry;
  std::optional<Generation> generation;

  bool operator==(const StatusAssignment&) const = default;
};

class ClassificationError : public Error {
 public:
  ClassificationError(std::string canonical_id, const std::string& what)
      : Error(what), canonical_id_(std::move(canonical_id)) {}
  const std::string& canonical_id() const { return canonical_id_; }

 private:
  std::string canonical_id_;
};

/// Transnational when born in a former colony, or born in a Western country
/// and listed under one of its minority groups. Throws ClassificationError
/// when the birth country is missing or not in the taxonomy.
StatusAssignment classify_author(const AuthorEntity& author, const CountryTaxonomy& taxonomy,
                                 const MinorityMap& minorities);

/// Inclusive ranges: Silent 1928-1945, Boomer 1946-1964, GenX 1965-1980,
/// Millennial 1981-1996; anything else is Other.
Generation assign_generation(int birth_year);

struct ClassifyResult {
  std::vector<StatusAssignment> assignments;
  std::vector<std::pair<std::string, std::string>> errors;  // canonical_id, message
};

ClassifyResult classify_all(std::span<const AuthorEntity> authors, const CountryTaxonomy& taxonomy,
                            const MinorityMap& minorities);

void write_assignments(std::ostream& out, std::span<const StatusAssignment> assignments);
std::vector<StatusAssignment> read_assignments(std::istream& in);

// -- representation statistics ---------------------------------------------

struct Tally {
  std::size_t western = 0;
  std::size_t transnational = 0;

  std::size_t total() const { return western + transnational; }
  void add(Status s, std::size_t n = 1) { (s == Status::Western ? western : transnational) += n; }
};

using CellKey = std::tuple<Generation, Gender, Status>;

struct RepresentationInput {
  Tally authors;
  std::size_t unclassified = 0;
  std::map<CellKey, std::size_t> cells;
  std::map<std::string, Tally> works;  // portion label -> works per status
};

/// Builds the counting input. Authors without an assignment count as
/// unclassified; `total_authors` may exceed the assignment count for that reason.
RepresentationInput tally_representation(std::span<const StatusAssignment> assignments,
                                         const std::map<std::string, Gender>& genders,
                                         const std::map<std::string, std::map<std::string, std::size_t>>& works,
                                         std::size_t total_authors);

struct ShareLine {
  std::string label;
  std::size_t count = 0;
  double percent = 0.0;
};

struct WorksLine {
  std::string portion;
  Tally works;
  double western_percent = 0.0;
  double transnational_percent = 0.0;
  std::string ratio;  // "1:x"
};

struct CellLine {
  Generation generation;
  Gender gender;
  Status status;
  std::size_t count = 0;
  double percent = 0.0;  // of all classified authors in the same generation
};

struct StatsReport {
  std::vector<ShareLine> authors;  // Western, Transnational, unclassified
  std::vector<CellLine> cells;
  std::vector<WorksLine> works;
};

StatsReport representation_stats(const RepresentationInput& input);

/// Transnational:Western ratio as "1:x", x = western / transnational rounded
/// to one decimal; "1:∞" when there are no Transnational works.
std::string works_ratio(std::size_t western, std::size_t transnational);

void write_stats_csv(std::ostream& out, const StatsReport& report);

}  // namespace kgef
