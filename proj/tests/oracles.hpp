#pragma once

// Brute-force reference implementations used as test oracles. They share no
// code with the library beyond the record types.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgef/align.hpp"
#include "support.hpp"

namespace kgef::test {

// ASCII-only name key; the synthetic corpora use ASCII names.
inline std::string ascii_key(const std::string& name) {
  std::string out;
  bool space = false;
  for (unsigned char c : name) {
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

struct OracleLink {
  std::map<std::string, std::string> pairs;    // wd -> external id
  std::map<std::string, std::string> reasons;  // wd -> reason code
};

// Scans every external record for every WD author.
inline OracleLink oracle_openlibrary(const std::vector<RawAuthorRecord>& wd, const std::vector<RawAuthorRecord>& ol) {
  OracleLink out;
  std::map<std::string, std::string> tentative;
  for (const auto& w : wd) {
    std::vector<const RawAuthorRecord*> same_name;
    for (const auto& o : ol) {
      if (ascii_key(o.name) == ascii_key(w.name)) same_name.push_back(&o);
    }
    if (same_name.empty()) {
      out.reasons[w.source_id] = "no-name-match";
      continue;
    }
    if (!w.birth_year) {
      out.reasons[w.source_id] = "no-birth-year";
      continue;
    }
    std::set<std::string> hits;
    bool any_year = false;
    for (const auto* o : same_name) {
      any_year = any_year || o->birth_year.has_value();
      if (o->birth_year == w.birth_year) hits.insert(o->source_id);
    }
    if (hits.empty()) {
      out.reasons[w.source_id] = any_year ? "year-mismatch" : "no-birth-year";
    } else if (hits.size() > 1) {
      out.reasons[w.source_id] = "ambiguous";
    } else {
      tentative[w.source_id] = *hits.begin();
    }
  }
  for (const auto& [w, id] : tentative) {
    int claims = 0;
    for (const auto& [w2, id2] : tentative) claims += id2 == id;
    if (claims == 1) {
      out.pairs[w] = id;
    } else {
      out.reasons[w] = "ambiguous";
    }
  }
  return out;
}

inline OracleLink oracle_goodreads(const std::vector<RawAuthorRecord>& wd, const std::vector<RawAuthorRecord>& gr) {
  OracleLink out;
  std::map<std::string, std::string> tentative;
  for (const auto& w : wd) {
    std::vector<std::string> hits;
    for (const auto& g : gr) {
      if (ascii_key(g.name) == ascii_key(w.name)) hits.push_back(g.source_id);
    }
    if (hits.empty()) {
      out.reasons[w.source_id] = "no-name-match";
    } else if (hits.size() > 1) {
      out.reasons[w.source_id] = "ambiguous";
    } else {
      tentative[w.source_id] = hits.front();
    }
  }
  for (const auto& [w, id] : tentative) {
    int claims = 0;
    for (const auto& [w2, id2] : tentative) claims += id2 == id;
    if (claims == 1) {
      out.pairs[w] = id;
    } else {
      out.reasons[w] = "ambiguous";
    }
  }
  return out;
}

inline OracleLink as_link(const MatchResult& m) {
  OracleLink out;
  for (const auto& p : m.pairs) out.pairs[p.wd_id] = p.matched_id;
  for (const auto& u : m.unmatched) out.reasons[u.wd_id] = std::string(to_string(u.reason));
  return out;
}

// Synthetic corpus of 200 records (100 WD, 60 OL, 40 GR) with known ground
// truth and planted homonyms, year mismatches and ambiguous duplicates.
struct SyntheticCorpus {
  std::vector<RawAuthorRecord> wd, ol, gr;
  std::map<std::string, std::string> truth_ol, truth_gr;  // unambiguous true links
  std::set<std::string> ambiguous_ol, ambiguous_gr;       // WD ids that must stay unlinked
};

inline SyntheticCorpus synthetic_corpus(std::uint64_t seed) {
  Gen gen(seed);
  SyntheticCorpus c;
  const auto author = [](std::string id, Source s, std::string name, std::optional<int> year) {
    RawAuthorRecord r;
    r.source_id = std::move(id);
    r.source = s;
    r.name = std::move(name);
    r.birth_year = year;
    return r;
  };
  const auto variant = [&](const std::string& name) {
    std::string v = name;
    if (gen.coin(0.3)) std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::toupper(ch); });
    if (gen.coin(0.3)) v = "  " + v + " ";
    return v;
  };
  for (int i = 0; i < 100; ++i) {
    c.wd.push_back(author("Q" + std::to_string(i), Source::WD, "Writer Number" + std::to_string(i), 1900 + i % 90));
  }
  // WD-side homonyms: Q90/Q91 share a name and year, Q92/Q93 share a name only.
  c.wd[91].name = c.wd[90].name;
  c.wd[91].birth_year = c.wd[90].birth_year;
  c.wd[93].name = c.wd[92].name;

  int ol_n = 0, gr_n = 0;
  const auto add_ol = [&](int wd, std::optional<int> year) {
    c.ol.push_back(author("OL" + std::to_string(++ol_n) + "A", Source::OL, variant(c.wd[wd].name), year));
    return c.ol.back().source_id;
  };
  const auto add_gr = [&](int wd) {
    c.gr.push_back(author(std::to_string(++gr_n), Source::GR, variant(c.wd[wd].name), std::nullopt));
    return c.gr.back().source_id;
  };

  for (int i = 0; i < 40; ++i) c.truth_ol["Q" + std::to_string(i)] = add_ol(i, c.wd[i].birth_year);
  for (int i = 40; i < 45; ++i) add_ol(i, *c.wd[i].birth_year + 1);  // year mismatch
  for (int i = 45; i < 50; ++i) add_ol(i, std::nullopt);            // no year on the OL side
  for (int i = 50; i < 54; ++i) {                                    // ambiguous duplicates
    add_ol(i, c.wd[i].birth_year);
    add_ol(i, c.wd[i].birth_year);
    c.ambiguous_ol.insert("Q" + std::to_string(i));
  }
  add_ol(90, c.wd[90].birth_year);  // claimed by two WD authors
  c.ambiguous_ol.insert({"Q90", "Q91"});
  while (static_cast<int>(c.ol.size()) < 60) {
    const std::string n = std::to_string(++ol_n);
    c.ol.push_back(author("OL" + n + "A", Source::OL, "Unrelated Person" + n, 1950));
  }

  for (int i = 60; i < 85; ++i) c.truth_gr["Q" + std::to_string(i)] = add_gr(i);
  for (int i = 85; i < 88; ++i) {  // Goodreads-side homonyms
    add_gr(i);
    add_gr(i);
    c.ambiguous_gr.insert("Q" + std::to_string(i));
  }
  add_gr(92);  // one GR name, two WD authors
  c.ambiguous_gr.insert({"Q92", "Q93"});
  while (static_cast<int>(c.gr.size()) < 40) {
    const std::string n = std::to_string(++gr_n);
    c.gr.push_back(author(n, Source::GR, "Someone Else" + n, std::nullopt));
  }

  gen.shuffle(c.wd);
  gen.shuffle(c.ol);
  gen.shuffle(c.gr);
  return c;
}

}  // namespace kgef::test
