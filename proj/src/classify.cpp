#include "kgef/classify.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "kgef/text.hpp"

namespace kgef {

namespace {

std::string country_code(std::string_view raw) {
  std::string code = trim(raw);
  for (char& c : code) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return code;
}

// Yields the data rows of a small config CSV, skipping blank lines, '#'
// comments (collected into `comments`) and a header whose first field matches.
template <typename Fn>
void for_each_row(std::istream& in, std::string_view header_first, std::string* comments, Fn fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      if (comments) {
        if (!comments->empty()) comments->push_back('\n');
        *comments += trim(std::string_view(trimmed).substr(1));
      }
      continue;
    }
    auto fields = split_csv_line(trimmed);
    if (fields.size() != 2) throw Error("line " + std::to_string(line_no) + ": expected 2 fields");
    if (trim(fields[0]) == header_first) continue;
    fn(line_no, trim(fields[0]), trim(fields[1]));
  }
}

}  // namespace

CountryTaxonomy CountryTaxonomy::parse(std::istream& in) {
  CountryTaxonomy t;
  for_each_row(in, "country_code", &t.provenance_note,
               [&](std::size_t line_no, const std::string& code, const std::string& cls) {
                 CountryClass value;
                 if (cls == "western") {
                   value = CountryClass::Western;
                 } else if (cls == "former_colony") {
                   value = CountryClass::FormerColony;
                 } else {
                   throw Error("taxonomy line " + std::to_string(line_no) + ": unknown class '" + cls + "'");
                 }
                 auto [it, inserted] = t.classes.emplace(country_code(code), value);
                 if (!inserted && it->second != value) {
                   throw Error("taxonomy line " + std::to_string(line_no) + ": conflicting class for " + code);
                 }
               });
  return t;
}

CountryTaxonomy CountryTaxonomy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read taxonomy " + path.string());
  return parse(in);
}

MinorityMap parse_minorities(std::istream& in) {
  MinorityMap out;
  for_each_row(in, "country_code", nullptr, [&](std::size_t, const std::string& code, const std::string& group) {
    out[country_code(code)].insert(normalize_name(group));
  });
  return out;
}

MinorityMap load_minorities(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read minorities " + path.string());
  return parse_minorities(in);
}

std::string_view to_string(Status status) {
  return status == Status::Western ? "Western" : "Transnational";
}

std::string_view to_string(Basis basis) {
  return basis == Basis::BirthCountry ? "birth_country" : "ethnic_minority";
}

std::string_view to_string(Generation generation) {
  switch (generation) {
    case Generation::Silent: return "Silent";
    case Generation::Boomer: return "Boomer";
    case Generation::GenX: return "GenX";
    case Generation::Millennial: return "Millennial";
    case Generation::Other: return "Other";
  }
  return "Other";
}

std::optional<Status> parse_status(std::string_view text) {
  if (text == "Western") return Status::Western;
  if (text == "Transnational") return Status::Transnational;
  return std::nullopt;
}

std::optional<Basis> parse_basis(std::string_view text) {
  if (text == "birth_country") return Basis::BirthCountry;
  if (text == "ethnic_minority") return Basis::EthnicMinority;
  return std::nullopt;
}

std::optional<Generation> parse_generation(std::string_view text) {
  for (Generation g : {Generation::Silent, Generation::Boomer, Generation::GenX, Generation::Millennial,
                       Generation::Other}) {
    if (to_string(g) == text) return g;
  }
  return std::nullopt;
}

StatusAssignment classify_author(const AuthorEntity& author, const CountryTaxonomy& taxonomy,
                                 const MinorityMap& minorities) {
  if (!author.country_of_birth || trim(*author.country_of_birth).empty()) {
    throw ClassificationError(author.canonical_id, "no country of birth");
  }
  const std::string code = country_code(*author.country_of_birth);
  auto it = taxonomy.classes.find(code);
  if (it == taxonomy.classes.end()) {
    throw ClassificationError(author.canonical_id, "country '" + code + "' not in taxonomy");
  }

  StatusAssignment a;
  a.canonical_id = author.canonical_id;
  a.generation = assign_generation(author.birth_year);
  if (it->second == CountryClass::FormerColony) {
    a.status = Status::Transnational;
    a.basis = Basis::BirthCountry;
    return a;
  }
  if (author.ethnic_group) {
    auto groups = minorities.find(code);
    if (groups != minorities.end() && groups->second.count(normalize_name(*author.ethnic_group))) {
      a.status = Status::Transnational;
      a.basis = Basis::EthnicMinority;
      return a;
    }
  }
  a.status = Status::Western;
  a.basis = Basis::BirthCountry;
  return a;
}

Generation assign_generation(int birth_year) {
  if (birth_year >= 1928 && birth_year <= 1945) return Generation::Silent;
  if (birth_year >= 1946 && birth_year <= 1964) return Generation::Boomer;
  if (birth_year >= 1965 && birth_year <= 1980) return Generation::GenX;
  if (birth_year >= 1981 && birth_year <= 1996) return Generation::Millennial;
  return Generation::Other;
}

ClassifyResult classify_all(std::span<const AuthorEntity> authors, const CountryTaxonomy& taxonomy,
                            const MinorityMap& minorities) {
  ClassifyResult out;
  for (const auto& author : authors) {
    try {
      out.assignments.push_back(classify_author(author, taxonomy, minorities));
    } catch (const ClassificationError& e) {
      out.errors.emplace_back(e.canonical_id(), e.what());
    }
  }
  return out;
}

void write_assignments(std::ostream& out, std::span<const StatusAssignment> assignments) {
  out << "canonical_id,status,basis,generation\n";
  for (const auto& a : assignments) {
    out << csv_escape(a.canonical_id) << ',' << to_string(a.status) << ',' << to_string(a.basis) << ','
        << (a.generation ? to_string(*a.generation) : std::string_view()) << '\n';
  }
}

std::vector<StatusAssignment> read_assignments(std::istream& in) {
  std::vector<StatusAssignment> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 4) throw Error("assignments line " + std::to_string(line_no) + ": expected 4 fields");
    StatusAssignment a;
    a.canonical_id = f[0];
    auto status = parse_status(f[1]);
    auto basis = parse_basis(f[2]);
    if (!status || !basis) throw Error("assignments line " + std::to_string(line_no) + ": bad status or basis");
    a.status = *status;
    a.basis = *basis;
    if (!f[3].empty()) a.generation = parse_generation(f[3]);
    out.push_back(std::move(a));
  }
  return out;
}

RepresentationInput tally_representation(std::span<const StatusAssignment> assignments,
                                         const std::map<std::string, Gender>& genders,
                                         const std::map<std::string, std::map<std::string, std::size_t>>& works,
                                         std::size_t total_authors) {
  RepresentationInput in;
  std::map<std::string, Status> status_of;
  for (const auto& a : assignments) {
    status_of[a.canonical_id] = a.status;
    in.authors.add(a.status);
    auto g = genders.find(a.canonical_id);
    const Gender gender = g == genders.end() ? Gender::Unknown : g->second;
    ++in.cells[{a.generation.value_or(Generation::Other), gender, a.status}];
  }
  in.unclassified = total_authors > in.authors.total() ? total_authors - in.authors.total() : 0;
  for (const auto& [portion, per_author] : works) {
    Tally& t = in.works[portion];
    for (const auto& [id, count] : per_author) {
      auto s = status_of.find(id);
      if (s != status_of.end()) t.add(s->second, count);
    }
  }
  return in;
}

namespace {

double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

StatsReport representation_stats(const RepresentationInput& input) {
  StatsReport r;
  const std::size_t classified = input.authors.total();
  const std::size_t all = classified + input.unclassified;
  r.authors.push_back({"Western", input.authors.western, percent(input.authors.western, classified)});
  r.authors.push_back({"Transnational", input.authors.transnational, percent(input.authors.transnational, classified)});
  r.authors.push_back({"unclassified", input.unclassified, percent(input.unclassified, all)});

  std::map<Generation, std::size_t> per_generation;
  for (const auto& [key, count] : input.cells) per_generation[std::get<0>(key)] += count;
  for (Generation g : {Generation::Silent, Generation::Boomer, Generation::GenX, Generation::Millennial,
                       Generation::Other}) {
    for (Gender gender : {Gender::Male, Gender::Female, Gender::Nonbinary, Gender::Unknown}) {
      for (Status s : {Status::Western, Status::Transnational}) {
        auto it = input.cells.find({g, gender, s});
        const std::size_t count = it == input.cells.end() ? 0 : it->second;
        r.cells.push_back({g, gender, s, count, percent(count, per_generation[g])});
      }
    }
  }

  for (const auto& [portion, tally] : input.works) {
    r.works.push_back({portion, tally, percent(tally.western, tally.total()),
                       percent(tally.transnational, tally.total()), works_ratio(tally.western, tally.transnational)});
  }
  return r;
}

std::string works_ratio(std::size_t western, std::size_t transnational) {
  if (transnational == 0) return "1:∞";
  const double x = static_cast<double>(western) / static_cast<double>(transnational);
  return "1:" + format_fixed(std::round(x * 10.0) / 10.0, 1);
}

void write_stats_csv(std::ostream& out, const StatsReport& report) {
  out << "section,group,gender,status,count,value\n";
  for (const auto& line : report.authors) {
    out << "authors,all,all," << line.label << ',' << line.count << ',' << format_fixed(line.percent, 1) << '\n';
  }
  for (const auto& c : report.cells) {
    out << "cells," << to_string(c.generation) << ',' << to_string(c.gender) << ',' << to_string(c.status) << ','
        << c.count << ',' << format_fixed(c.percent, 1) << '\n';
  }
  for (const auto& w : report.works) {
    out << "works," << csv_escape(w.portion) << ",all,Western," << w.works.western << ','
        << format_fixed(w.western_percent, 1) << '\n';
    out << "works," << csv_escape(w.portion) << ",all,Transnational," << w.works.transnational << ','
        << format_fixed(w.transnational_percent, 1) << '\n';
    out << "ratio," << csv_escape(w.portion) << ",all,Transnational:Western,," << w.ratio << '\n';
  }
}

}  // namespace kgef
