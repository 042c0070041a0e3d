#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kgef/expose.hpp"
#include "support.hpp"

using namespace kgef;

namespace {

EntityEmbeddings make_embeddings(std::vector<std::pair<std::string, std::vector<double>>> rows) {
  std::sort(rows.begin(), rows.end());
  std::vector<std::string> labels;
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().second.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    labels.push_back(rows[i].first);
    for (std::size_t j = 0; j < rows[i].second.size(); ++j) m(i, j) = rows[i].second[j];
  }
  return EntityEmbeddings(labels, m);
}

struct Population {
  std::vector<std::string> ids;
  std::map<std::string, Status> statuses;
  std::vector<std::string> western;
  EntityEmbeddings emb{{}, Matrix(0, 0)};
};

Population random_population(test::Gen& gen, int n, int d, double p_transnational) {
  Population pop;
  Matrix m(n, d);
  for (int i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "author:Q%04d", i);
    pop.ids.emplace_back(buf);
    for (int j = 0; j < d; ++j) m(i, j) = gen.real(-1, 1);
    const Status s = gen.coin(p_transnational) ? Status::Transnational : Status::Western;
    pop.statuses[pop.ids.back()] = s;
    if (s == Status::Western) pop.western.push_back(pop.ids.back());
  }
  pop.emb = EntityEmbeddings(pop.ids, m);
  return pop;
}

// Plain nested loop over candidates.
std::vector<std::string> oracle_order(const EntityEmbeddings& emb, const std::string& target,
                                      const std::vector<std::string>& candidates) {
  const auto t = emb.row(*emb.find(target));
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& c : candidates) {
    const auto v = emb.row(*emb.find(c));
    double dot = 0, nt = 0, nv = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      dot += t(i) * v(i);
      nt += t(i) * t(i);
      nv += v(i) * v(i);
    }
    if (nv == 0) continue;
    scored.emplace_back(dot / std::sqrt(nt * nv), c);
  }
  std::vector<std::string> out;
  while (!scored.empty()) {
    auto best = scored.begin();
    for (auto it = scored.begin(); it != scored.end(); ++it) {
      if (it->first > best->first || (it->first == best->first && it->second < best->second)) best = it;
    }
    out.push_back(best->second);
    scored.erase(best);
  }
  return out;
}

std::vector<std::string> ids_of(const std::vector<Neighbor>& ns) {
  std::vector<std::string> out;
  for (const auto& n : ns) out.push_back(n.id);
  return out;
}

}  // namespace

TEST_CASE("cosine") {
  auto e = make_embeddings({{"a", {1, 0}}, {"b", {0, 1}}, {"c", {2, 0}}, {"d", {-1, 0}}, {"z", {0, 0}}});
  CHECK(cosine(e.row(0), e.row(1)) == 0.0);
  CHECK(cosine(e.row(0), e.row(2)) == doctest::Approx(1.0));
  CHECK(cosine(e.row(0), e.row(3)) == doctest::Approx(-1.0));
  CHECK(cosine(e.row(0), e.row(4)) == 0.0);
}

TEST_CASE("similar_authors on hand-set vectors") {
  auto e = make_embeddings({{"t", {1, 0}},
                            {"a", {0.9, 0.1}},
                            {"b", {0, 1}},
                            {"c", {1, 1}},
                            {"d", {-1, 0}},
                            {"e", {2, 2}},
                            {"z", {0, 0}}});
  std::vector<std::string> candidates = {"a", "b", "c", "d", "e"};
  auto ranked = similar_authors(e, "t", candidates);
  CHECK(ids_of(ranked) == std::vector<std::string>{"a", "c", "e", "b", "d"});
  CHECK(ids_of(ranked) == oracle_order(e, "t", candidates));

  std::vector<std::string> warnings;
  std::vector<std::string> with_zero = {"z", "a"};
  auto r2 = similar_authors(e, "t", with_zero, &warnings);
  CHECK(ids_of(r2) == std::vector<std::string>{"a"});
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("z") != std::string::npos);

  std::vector<std::string> self = {"t", "a"};
  CHECK_THROWS_AS(similar_authors(e, "t", self), Error);
  std::vector<std::string> missing = {"nobody"};
  CHECK_THROWS_AS(similar_authors(e, "t", missing), Error);
  CHECK_THROWS_AS(similar_authors(e, "z", candidates), Error);
}

TEST_CASE("similar_authors matches the brute-force ordering") {
  test::Gen gen(41);
  for (int round = 0; round < 30; ++round) {
    // Small integer coordinates force exact ties.
    const int n = gen.integer(3, 25);
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    for (int i = 0; i < n; ++i) {
      rows.push_back({"x" + std::to_string(i), {double(gen.integer(-2, 2)), double(gen.integer(-2, 2))}});
    }
    rows[0].second = {1, 1};
    auto e = make_embeddings(rows);
    std::vector<std::string> candidates;
    for (int i = 1; i < n; ++i) candidates.push_back(rows[i].first);
    CHECK(ids_of(similar_authors(e, "x0", candidates)) == oracle_order(e, "x0", candidates));
  }
}

TEST_CASE("top_count") {
  CHECK(top_count(10, 7) == 1);
  CHECK(top_count(1, 250) == 3);
  CHECK(top_count(5, 100) == 5);
  CHECK(top_count(10, 0) == 0);
  CHECK(top_count(100, 9) == 9);
  test::Gen gen(42);
  for (int i = 0; i < 1000; ++i) {
    const int k = gen.integer(1, 100);
    const auto n = static_cast<std::size_t>(gen.integer(0, 5000));
    const auto c = top_count(k, n);
    CHECK(c * 100 >= k * n);
    CHECK((c == 0 || (c - 1) * 100 < k * n));
  }
}

TEST_CASE("draw_sample") {
  std::vector<std::string> pop;
  for (int i = 0; i < 50; ++i) pop.push_back("w" + std::to_string(i));
  auto a = draw_sample(pop, 10, 7);
  CHECK(a.size() == 10);
  CHECK(a == draw_sample(pop, 10, 7));
  std::set<std::string> unique(a.begin(), a.end());
  CHECK(unique.size() == 10);
  auto shuffled = pop;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(draw_sample(shuffled, 10, 7) == a);
  CHECK(draw_sample(pop, 50, 1).size() == 50);
  CHECK_THROWS_AS(draw_sample(pop, 51, 1), Error);
}

TEST_CASE("exposure ratios") {
  test::Gen gen(43);
  SUBCASE("all other authors Transnational gives 100%") {
    auto pop = random_population(gen, 40, 6, 1.0);
    pop.statuses["author:Q0000"] = Status::Western;
    std::vector<std::string> sample = {"author:Q0000"};
    auto r = exposure_ratios(pop.emb, pop.statuses, sample);
    for (int k : kDefaultKLevels) CHECK(r.ratios.at(k).percent == 100.0);
    CHECK(r.ratios.at(10).pooled == top_count(10, 39));
  }
  SUBCASE("pooled counts agree with a direct tally") {
    auto pop = random_population(gen, 120, 8, 0.3);
    auto sample = draw_sample(pop.western, 15, 3);
    auto r = exposure_ratios(pop.emb, pop.statuses, sample);
    for (int k : kDefaultKLevels) {
      std::size_t count = 0, pooled = 0;
      for (const auto& target : sample) {
        std::vector<std::string> others;
        for (const auto& id : pop.ids) {
          if (id != target) others.push_back(id);
        }
        auto order = oracle_order(pop.emb, target, others);
        const auto top = top_count(k, order.size());
        for (std::size_t i = 0; i < top; ++i) count += pop.statuses.at(order[i]) == Status::Transnational;
        pooled += top;
      }
      CHECK(r.ratios.at(k).count == count);
      CHECK(r.ratios.at(k).pooled == pooled);
      CHECK(r.ratios.at(k).percent == doctest::Approx(100.0 * count / pooled));
    }
  }
  SUBCASE("invariant under uniform scaling") {
    auto pop = random_population(gen, 80, 5, 0.4);
    auto sample = draw_sample(pop.western, 10, 5);
    auto before = exposure_ratios(pop.emb, pop.statuses, sample);
    for (double f : {0.001, 3.0, 1e6}) {
      auto scaled = pop.emb;
      scaled.scale(f);
      auto after = exposure_ratios(scaled, pop.statuses, sample);
      for (int k : kDefaultKLevels) CHECK(after.ratios.at(k).count == before.ratios.at(k).count);
    }
  }
  SUBCASE("top-k pools nest") {
    auto pop = random_population(gen, 150, 6, 0.25);
    auto sample = draw_sample(pop.western, 20, 9);
    std::vector<int> ks;
    for (int k = 1; k <= 100; k += 7) ks.push_back(k);
    auto r = exposure_ratios(pop.emb, pop.statuses, sample, ks);
    for (std::size_t i = 1; i < ks.size(); ++i) {
      CHECK(r.ratios.at(ks[i]).count >= r.ratios.at(ks[i - 1]).count);
      CHECK(r.ratios.at(ks[i]).pooled >= r.ratios.at(ks[i - 1]).pooled);
    }
    for (const auto& t : r.per_target) {
      auto again = exposure_ratios(pop.emb, pop.statuses, std::vector<std::string>{t.target}, ks);
      CHECK(again.per_target.front().ranked.size() == t.ranked.size());
    }
  }
  SUBCASE("deterministic for a seed") {
    auto pop = random_population(gen, 60, 4, 0.5);
    auto a = exposure_ratios(pop.emb, pop.statuses, draw_sample(pop.western, 8, 11));
    auto b = exposure_ratios(pop.emb, pop.statuses, draw_sample(pop.western, 8, 11));
    std::ostringstream oa, ob;
    write_exposure_csv(oa, a);
    write_exposure_csv(ob, b);
    CHECK(oa.str() == ob.str());
  }
  SUBCASE("bad samples are rejected") {
    auto pop = random_population(gen, 30, 4, 0.5);
    std::vector<std::string> transnational_target;
    for (const auto& [id, s] : pop.statuses) {
      if (s == Status::Transnational) transnational_target = {id};
    }
    CHECK_THROWS_AS(exposure_ratios(pop.emb, pop.statuses, transnational_target), Error);
    std::vector<std::string> unknown = {"author:nobody"};
    CHECK_THROWS_AS(exposure_ratios(pop.emb, pop.statuses, unknown), Error);
  }
}

TEST_CASE("continent flows") {
  SUBCASE("a sample of one") {
    auto e = make_embeddings({{"w", {1, 0}}, {"t1", {0.9, 0.1}}, {"t2", {0, 1}}, {"w2", {1, 0.01}}});
    std::map<std::string, Status> st = {
        {"w", Status::Western}, {"w2", Status::Western}, {"t1", Status::Transnational}, {"t2", Status::Transnational}};
    std::map<std::string, std::string> country = {{"w", "FR"}, {"t1", "NG"}, {"t2", "IN"}};
    std::map<std::string, std::string> continent = {{"FR", "Europe"}, {"NG", "Africa"}, {"IN", "Asia"}};
    std::vector<std::string> sample = {"w"};
    auto f = continent_flows(e, st, sample, country, continent);
    CHECK(f.counts.size() == 1);
    CHECK(f.counts.at({"Europe", "Africa"}) == 1);
    CHECK(f.unknown == 0);

    std::vector<std::string> no_country = {"w2"};
    auto g = continent_flows(e, st, no_country, country, continent);
    CHECK(g.counts.at({std::string(kUnknownContinent), "Africa"}) == 1);
    CHECK(g.unknown == 1);
  }
  SUBCASE("conservation and agreement with a nearest-neighbour scan") {
    test::Gen gen(44);
    auto pop = random_population(gen, 100, 6, 0.35);
    const std::vector<std::string> codes = {"FR", "US", "NG", "IN", "BR", "XX"};
    const std::map<std::string, std::string> continent = {
        {"FR", "Europe"}, {"US", "North America"}, {"NG", "Africa"}, {"IN", "Asia"}, {"BR", "Latin America"}};
    std::map<std::string, std::string> country;
    for (const auto& id : pop.ids) {
      if (!gen.coin(0.1)) country[id] = gen.pick(codes);
    }
    auto sample = draw_sample(pop.western, 25, 2);
    auto f = continent_flows(pop.emb, pop.statuses, sample, country, continent);
    std::size_t total = 0;
    for (const auto& [k, v] : f.counts) total += v;
    CHECK(total == sample.size());

    std::vector<std::string> transnational;
    for (const auto& [id, s] : pop.statuses) {
      if (s == Status::Transnational) transnational.push_back(id);
    }
    const auto cont = [&](const std::string& id) {
      auto c = country.find(id);
      if (c == country.end() || !continent.count(c->second)) return std::string(kUnknownContinent);
      return continent.at(c->second);
    };
    std::map<std::pair<std::string, std::string>, std::size_t> expected;
    for (const auto& w : sample) ++expected[{cont(w), cont(oracle_order(pop.emb, w, transnational).front())}];
    CHECK(f.counts == expected);
  }
}

TEST_CASE("csv files") {
  ExposureReport r;
  r.ratios[1] = {34.8, 34, 98};
  r.ratios[10] = {12.5, 125, 1000};
  std::ostringstream out;
  write_exposure_csv(out, r);
  std::istringstream in(out.str());
  auto back = read_exposure_csv(in);
  CHECK(back.ratios.at(1).count == 34);
  CHECK(back.ratios.at(10).pooled == 1000);
  CHECK(back.ratios.at(10).percent == doctest::Approx(12.5));
  CHECK(exposure_cell(r.ratios[1]) == "34.8% (34)");

  ContinentFlow f;
  f.counts[{"Europe", "Africa"}] = 3;
  f.counts[{"unknown", "Asia"}] = 1;
  f.unknown = 1;
  std::ostringstream fo;
  write_flow_csv(fo, f);
  std::istringstream fi(fo.str());
  auto fb = read_flow_csv(fi);
  CHECK(fb.counts == f.counts);
  CHECK(fb.unknown == 1);

  std::istringstream continents("country_code,continent\n# note\nng,Africa\nFR, Europe \n");
  auto c = parse_continents(continents);
  CHECK(c.at("NG") == "Africa");
  CHECK(c.at("FR") == "Europe");
  CHECK(load_continents(test::source_dir() / "data/config/continents.csv").count("US"));
}
