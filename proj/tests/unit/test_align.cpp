#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "kgef/align.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace kgef;

namespace {

RawAuthorRecord person(std::string id, Source source, std::string name, std::optional<int> year = std::nullopt) {
  RawAuthorRecord r;
  r.source_id = std::move(id);
  r.source = source;
  r.name = std::move(name);
  r.birth_year = year;
  return r;
}

std::string reason_of(const MatchResult& m, const std::string& wd) {
  for (const auto& u : m.unmatched) {
    if (u.wd_id == wd) return std::string(to_string(u.reason));
  }
  return "";
}

RawWorkRecord work(std::string id, Source source, std::vector<std::string> isbns) {
  RawWorkRecord w;
  w.source_id = std::move(id);
  w.source = source;
  w.title = "t";
  w.author_source_ids = {"A1"};
  w.isbn_list = std::move(isbns);
  return w;
}

}  // namespace

TEST_CASE("OpenLibrary matcher") {
  const std::vector<RawAuthorRecord> wd = {person("Q1", Source::WD, "Clarissa Thompson", 1859)};

  SUBCASE("name and year agree") {
    auto m = match_openlibrary(wd, {{person("OL1A", Source::OL, "clarissa  thompson", 1859)}});
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0] == MatchPair{"Q1", "OL1A"});
  }
  SUBCASE("year mismatch") {
    auto m = match_openlibrary(wd, {{person("OL1A", Source::OL, "Clarissa Thompson", 1860)}});
    CHECK(m.pairs.empty());
    CHECK(reason_of(m, "Q1") == "year-mismatch");
  }
  SUBCASE("two OL ids with the same name and year") {
    auto m = match_openlibrary(wd, {{person("OL1A", Source::OL, "Clarissa Thompson", 1859),
                                     person("OL2A", Source::OL, "Clarissa Thompson", 1859)}});
    CHECK(m.pairs.empty());
    CHECK(reason_of(m, "Q1") == "ambiguous");
  }
  SUBCASE("missing years") {
    auto m = match_openlibrary(wd, {{person("OL1A", Source::OL, "Clarissa Thompson")}});
    CHECK(reason_of(m, "Q1") == "no-birth-year");
    auto m2 = match_openlibrary({{person("Q1", Source::WD, "Clarissa Thompson")}},
                                {{person("OL1A", Source::OL, "Clarissa Thompson", 1859)}});
    CHECK(reason_of(m2, "Q1") == "no-birth-year");
  }
  SUBCASE("no name match and diacritics") {
    auto m = match_openlibrary({{person("Q1", Source::WD, "José Rizal", 1861)}},
                               {{person("OL1A", Source::OL, "Jose Rizal", 1861)}});
    CHECK(reason_of(m, "Q1") == "no-name-match");
  }
  SUBCASE("one OL id claimed by two WD authors links neither") {
    auto m = match_openlibrary({{person("Q1", Source::WD, "Ana Lima", 1950), person("Q2", Source::WD, "Ana Lima", 1950)}},
                               {{person("OL1A", Source::OL, "Ana Lima", 1950)}});
    CHECK(m.pairs.empty());
    CHECK(reason_of(m, "Q1") == "ambiguous");
    CHECK(reason_of(m, "Q2") == "ambiguous");
  }
}

TEST_CASE("Goodreads matcher") {
  SUBCASE("unique name") {
    auto m = match_goodreads({{person("Q1", Source::WD, "Ama Ata Aidoo", 1942)}},
                             {{person("7", Source::GR, "ama ata aidoo")}});
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0] == MatchPair{"Q1", "7"});
  }
  SUBCASE("homonyms are removed before matching") {
    auto m = match_goodreads({{person("Q1", Source::WD, "John Smith", 1950)}},
                             {{person("1", Source::GR, "John Smith"), person("2", Source::GR, "John Smith")}});
    CHECK(m.pairs.empty());
    CHECK(reason_of(m, "Q1") == "ambiguous");
  }
  SUBCASE("a name matching two WD authors links neither") {
    auto m = match_goodreads({{person("Q1", Source::WD, "Maria Santos", 1962), person("Q2", Source::WD, "Maria Santos", 1978)}},
                             {{person("1", Source::GR, "Maria Santos")}});
    CHECK(m.pairs.empty());
    CHECK(m.unmatched.size() == 2);
  }
}

TEST_CASE("matchers agree with the brute-force oracle and ignore input order") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto c = test::synthetic_corpus(seed);
    const auto ol = match_openlibrary(c.wd, c.ol);
    const auto gr = match_goodreads(c.wd, c.gr);
    const auto oracle_ol = test::oracle_openlibrary(c.wd, c.ol);
    const auto oracle_gr = test::oracle_goodreads(c.wd, c.gr);
    CHECK(test::as_link(ol).pairs == oracle_ol.pairs);
    CHECK(test::as_link(ol).reasons == oracle_ol.reasons);
    CHECK(test::as_link(gr).pairs == oracle_gr.pairs);
    CHECK(test::as_link(gr).reasons == oracle_gr.reasons);

    test::Gen gen(seed * 31);
    auto wd = c.wd;
    auto olr = c.ol;
    auto grr = c.gr;
    gen.shuffle(wd);
    gen.shuffle(olr);
    gen.shuffle(grr);
    const auto ol2 = match_openlibrary(wd, olr);
    const auto gr2 = match_goodreads(wd, grr);
    CHECK(ol2.pairs == ol.pairs);
    CHECK(ol2.unmatched == ol.unmatched);
    CHECK(gr2.pairs == gr.pairs);
    CHECK(gr2.unmatched == gr.unmatched);

    // No external id is handed to two WD authors.
    std::set<std::string> seen;
    for (const auto& p : ol.pairs) CHECK(seen.insert(p.matched_id).second);
  }
}

TEST_CASE("precision is 1.0 on a corpus without homonyms or year collisions") {
  auto c = test::synthetic_corpus(99);
  const auto ol = match_openlibrary(c.wd, c.ol);
  for (const auto& p : ol.pairs) {
    REQUIRE(c.truth_ol.count(p.wd_id));
    CHECK(c.truth_ol.at(p.wd_id) == p.matched_id);
  }
  CHECK(ol.pairs.size() == c.truth_ol.size());
  const auto gr = match_goodreads(c.wd, c.gr);
  for (const auto& p : gr.pairs) CHECK(c.truth_gr.at(p.wd_id) == p.matched_id);
  CHECK(gr.pairs.size() == c.truth_gr.size());
}

TEST_CASE("resolve_precedence") {
  const std::vector<RawAuthorRecord> wd = {person("Q1", Source::WD, "A", 1950), person("Q2", Source::WD, "B", 1960),
                                           person("Q3", Source::WD, "C", 1970)};
  MatchResult ol{Source::OL, {{"Q1", "OL1A"}}, {}};
  MatchResult gr{Source::GR, {{"Q1", "11"}, {"Q2", "12"}}, {}};
  auto entities = resolve_precedence(wd, ol, gr);
  REQUIRE(entities.size() == 3);
  CHECK(entities[0].work_source == Source::OL);
  CHECK(entities[0].cross_ids.at(Source::OL) == "OL1A");
  CHECK(entities[0].cross_ids.at(Source::GR) == "11");  // kept, not used for works
  CHECK(entities[1].work_source == Source::GR);
  CHECK_FALSE(entities[2].work_source);
  CHECK(entities[2].cross_ids.size() == 1);

  CHECK_THROWS_AS(resolve_precedence({{person("Q9", Source::WD, "X")}}, ol, gr), Error);

  for (const auto& e : entities) {
    std::istringstream in(to_json(e).dump());
    CHECK(author_from_json(nlohmann::json::parse(in)) == e);
  }
}

TEST_CASE("work selection follows the collection policy") {
  std::vector<AuthorEntity> authors(2);
  authors[0].canonical_id = "Q1";
  authors[0].cross_ids = {{Source::WD, "Q1"}, {Source::OL, "OL1A"}, {Source::GR, "11"}};
  authors[0].work_source = Source::OL;
  authors[1].canonical_id = "Q2";
  authors[1].cross_ids = {{Source::WD, "Q2"}, {Source::GR, "12"}};
  authors[1].work_source = Source::GR;

  IngestBatch batch;
  auto w = [](std::string id, Source s, std::vector<std::string> a) {
    RawWorkRecord r;
    r.source_id = std::move(id);
    r.source = s;
    r.title = "t";
    r.author_source_ids = std::move(a);
    return r;
  };
  batch.sources[Source::WD].works = {w("Q100", Source::WD, {"Q1", "Q2"})};
  batch.sources[Source::OL].works = {w("OL1W", Source::OL, {"OL1A", "OL9A"}), w("OL2W", Source::OL, {"OL9A"})};
  batch.sources[Source::GR].works = {w("21", Source::GR, {"11"}), w("22", Source::GR, {"12"})};
  RawEditionRecord e1, e2;
  e1.source_id = "OL1M";
  e1.source = Source::OL;
  e1.work_source_id = "OL1W";
  e2 = e1;
  e2.source_id = "OL2M";
  e2.work_source_id = "OL2W";
  batch.sources[Source::OL].editions = {e1, e2};

  auto sel = select_works(authors, batch);
  std::vector<std::string> ids;
  for (const auto& r : sel.works) ids.push_back(r.source_id);
  CHECK(ids == std::vector<std::string>{"Q100", "OL1W", "22"});
  CHECK(sel.works[1].author_source_ids == std::vector<std::string>{"OL1A"});
  REQUIRE(sel.editions.size() == 1);
  CHECK(sel.editions[0].source_id == "OL1M");
  CHECK(sel.dropped_works == 2);
}

TEST_CASE("ISBN join") {
  RawWorkRecord gb = work("GB1", Source::GB, {"9780306406157"});
  gb.blurb = "From Google Books";
  gb.subjects = {"Poetry"};
  gb.publish_year = 1999;

  SUBCASE("fills missing fields with GB provenance") {
    std::vector<RawWorkRecord> works = {work("OL1W", Source::OL, {"0306406152"})};
    std::vector<RawEditionRecord> editions;
    auto stats = join_isbn(works, editions, {&gb, 1});
    CHECK(works[0].blurb == "From Google Books");
    CHECK(works[0].subjects == std::vector<std::string>{"Poetry"});
    CHECK(works[0].publish_year == 1999);
    CHECK(works[0].filled_by.at("blurb") == Source::GB);
    CHECK(stats.blurbs == 1);
  }
  SUBCASE("never overwrites") {
    std::vector<RawWorkRecord> works = {work("OL1W", Source::OL, {"9780306406157"})};
    works[0].blurb = "Own blurb";
    std::vector<RawEditionRecord> editions;
    join_isbn(works, editions, {&gb, 1});
    CHECK(works[0].blurb == "Own blurb");
    CHECK_FALSE(works[0].filled_by.count("blurb"));
  }
  SUBCASE("ISBN-10 and ISBN-13 forms reach the same record") {
    std::vector<RawWorkRecord> works = {work("A", Source::OL, {"0306406152"}), work("B", Source::GR, {"9780306406157"})};
    std::vector<RawEditionRecord> editions(1);
    editions[0].source_id = "E";
    editions[0].isbn = "0-306-40615-2";
    join_isbn(works, editions, {&gb, 1});
    CHECK(works[0].blurb == works[1].blurb);
    CHECK(editions[0].publish_year == 1999);
    CHECK(editions[0].filled_by.at("publish_year") == Source::GB);
  }
  SUBCASE("an ISBN claimed twice by GB is skipped") {
    std::vector<RawWorkRecord> gbs = {gb, gb};
    gbs[1].source_id = "GB2";
    std::vector<RawWorkRecord> works = {work("A", Source::OL, {"0306406152"})};
    std::vector<RawEditionRecord> editions;
    auto stats = join_isbn(works, editions, gbs);
    CHECK_FALSE(works[0].blurb);
    CHECK(stats.ambiguous_isbns == 1);
  }
  SUBCASE("invalid ISBNs never join") {
    std::vector<RawWorkRecord> works = {work("A", Source::OL, {"0306406153"})};
    std::vector<RawEditionRecord> editions;
    join_isbn(works, editions, {&gb, 1});
    CHECK_FALSE(works[0].blurb);
  }
}

TEST_CASE("alignment report lists matched and unmatched authors") {
  MatchResult ol{Source::OL, {{"Q1", "OL1A"}}, {{"Q2", UnmatchedReason::YearMismatch}}};
  MatchResult gr{Source::GR, {}, {{"Q1", UnmatchedReason::NoNameMatch}, {"Q2", UnmatchedReason::Ambiguous}}};
  std::ostringstream out;
  write_alignment_report(out, ol, gr);
  CHECK(out.str() ==
        "wd_id,matched_source,matched_id,reason\n"
        "Q1,GR,,no-name-match\n"
        "Q1,OL,OL1A,matched\n"
        "Q2,GR,,ambiguous\n"
        "Q2,OL,,year-mismatch\n");
}
