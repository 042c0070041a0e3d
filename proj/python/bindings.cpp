#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kgef/align.hpp"
#include "kgef/classify.hpp"
#include "kgef/embed.hpp"
#include "kgef/expose.hpp"
#include "kgef/graph.hpp"
#include "kgef/ingest.hpp"
#include "kgef/isbn.hpp"
#include "kgef/pipeline.hpp"
#include "kgef/text.hpp"

namespace py = pybind11;
using namespace kgef;

namespace {

using TripleTuple = std::tuple<int, int, int>;

std::vector<IndexedTriple> to_triples(const std::vector<TripleTuple>& in) {
  std::vector<IndexedTriple> out;
  out.reserve(in.size());
  for (const auto& [h, r, t] : in) out.push_back({h, r, t});
  return out;
}

py::dict match_to_dict(const MatchResult& m) {
  py::list pairs, unmatched;
  for (const auto& p : m.pairs) pairs.append(py::make_tuple(p.wd_id, p.matched_id));
  for (const auto& u : m.unmatched) unmatched.append(py::make_tuple(u.wd_id, std::string(to_string(u.reason))));
  py::dict d;
  d["pairs"] = pairs;
  d["unmatched"] = unmatched;
  return d;
}

Source source_of(const std::string& text) {
  auto s = parse_source(text);
  if (!s) throw Error("unknown source '" + text + "'");
  return *s;
}

std::map<std::string, Status> to_statuses(const std::map<std::string, std::string>& in) {
  std::map<std::string, Status> out;
  for (const auto& [id, text] : in) {
    auto s = parse_status(text);
    if (!s) throw Error("unknown status '" + text + "' for " + id);
    out[id] = *s;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "kgef core bindings";
  py::register_exception<Error>(m, "KgefError", PyExc_RuntimeError);

  m.def("normalize_name", &normalize_name, py::arg("name"));
  m.def("isbn_to_13", &isbn::to_isbn13, py::arg("raw"), "Canonical ISBN-13, or None when the checksum fails.");
  m.def("assign_generation", [](int year) { return std::string(to_string(assign_generation(year))); });
  m.def("works_ratio", &works_ratio, py::arg("western"), py::arg("transnational"));
  m.def("top_count", &top_count, py::arg("k_percent"), py::arg("n"));

  py::class_<RawAuthorRecord>(m, "AuthorRecord")
      .def(py::init([](std::string source_id, std::string name, std::optional<int> birth_year,
                       std::optional<std::string> country, std::optional<std::string> ethnic_group,
                       const std::string& source) {
             RawAuthorRecord r;
             r.source_id = std::move(source_id);
             r.name = std::move(name);
             r.birth_year = birth_year;
             r.country_of_birth = std::move(country);
             r.ethnic_group = std::move(ethnic_group);
             r.source = source_of(source);
             return r;
           }),
           py::arg("source_id"), py::arg("name"), py::arg("birth_year") = py::none(),
           py::arg("country_of_birth") = py::none(), py::arg("ethnic_group") = py::none(),
           py::arg("source") = "WD")
      .def_readwrite("source_id", &RawAuthorRecord::source_id)
      .def_readwrite("name", &RawAuthorRecord::name)
      .def_readwrite("birth_year", &RawAuthorRecord::birth_year)
      .def_readwrite("country_of_birth", &RawAuthorRecord::country_of_birth)
      .def_readwrite("ethnic_group", &RawAuthorRecord::ethnic_group)
      .def_property_readonly("source", [](const RawAuthorRecord& r) { return std::string(to_string(r.source)); })
      .def("__repr__", [](const RawAuthorRecord& r) { return "AuthorRecord(" + r.source_id + ", " + r.name + ")"; });

  m.def(
      "filter_by_birth_year",
      [](std::vector<RawAuthorRecord> records, int cutoff) {
        auto f = filter_by_birth_year(std::move(records), cutoff);
        return py::make_tuple(f.kept, f.removed);
      },
      py::arg("records"), py::arg("cutoff") = kBirthYearCutoff);
  m.def("match_openlibrary", [](const std::vector<RawAuthorRecord>& wd, const std::vector<RawAuthorRecord>& ol) {
    return match_to_dict(match_openlibrary(wd, ol));
  });
  m.def("match_goodreads", [](const std::vector<RawAuthorRecord>& wd, const std::vector<RawAuthorRecord>& gr) {
    return match_to_dict(match_goodreads(wd, gr));
  });

  py::class_<Graph>(m, "Graph")
      .def_static("load", py::overload_cast<const std::filesystem::path&>(&deserialize), py::arg("path"))
      .def("save", [](const Graph& g, const std::filesystem::path& p) { serialize(g, p); })
      .def("__len__", [](const Graph& g) { return g.triples().size(); })
      .def("triples",
           [](const Graph& g) {
             py::list out;
             for (const auto& t : g.triples()) {
               out.append(py::make_tuple(t.subject, std::string(to_string(t.predicate)), t.object.value,
                                         std::string(to_string(t.provenance))));
             }
             return out;
           })
      .def("count_stats", [](const Graph& g) {
        const GraphStats s = count_stats(g);
        py::dict out;
        const auto row = [](const ProvenanceCounts& c) {
          return py::dict(py::arg("wikidata") = c.wikidata, py::arg("external") = c.external,
                          py::arg("total") = c.total);
        };
        for (const auto& [kind, c] : s.entities) out[py::str(std::string(to_string(kind)))] = row(c);
        out["Blurb"] = row(s.blurbs);
        return out;
      });

  py::enum_<Model>(m, "Model")
      .value("TransE", Model::TransE)
      .value("TransR", Model::TransR)
      .value("DistMult", Model::DistMult)
      .value("RESCAL", Model::RESCAL);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("margin", &TrainConfig::margin)
      .def_readwrite("negatives", &TrainConfig::negatives)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("regularization", &TrainConfig::regularization)
      .def_readwrite("dim", &TrainConfig::dim);

  py::class_<TrainResult>(m, "TrainResult")
      .def_property_readonly("entity_vecs", [](const TrainResult& r) { return r.params.entity_vecs; })
      .def_property_readonly("relation_vecs", [](const TrainResult& r) { return r.params.relation_vecs; })
      .def_property_readonly("relation_mats", [](const TrainResult& r) { return r.params.relation_mats; })
      .def_readonly("epoch_loss", &TrainResult::epoch_loss)
      .def("score", [](const TrainResult& r, int h, int rel, int t) { return score(r.params, h, rel, t); });

  m.def(
      "train",
      [](Model model, const std::vector<TripleTuple>& triples, int num_entities, int num_relations,
         const TrainConfig& config) {
        KgDataset data;
        for (int i = 0; i < num_entities; ++i) data.entity_labels.push_back(std::to_string(i));
        for (int i = 0; i < num_relations; ++i) data.relation_labels.push_back(std::to_string(i));
        data.triples = to_triples(triples);
        for (const auto& t : data.triples) {
          if (t.head < 0 || t.tail < 0 || t.head >= num_entities || t.tail >= num_entities || t.relation < 0 ||
              t.relation >= num_relations) {
            throw Error("triple index out of range");
          }
        }
        std::sort(data.triples.begin(), data.triples.end());
        py::gil_scoped_release release;
        return train(model, data, config);
      },
      py::arg("model"), py::arg("triples"), py::arg("num_entities"), py::arg("num_relations"), py::arg("config"));

  py::class_<LinkPredictionMetrics>(m, "LinkPredictionMetrics")
      .def_readonly("mrr", &LinkPredictionMetrics::mrr)
      .def_readonly("hits_at_1", &LinkPredictionMetrics::hits_at_1)
      .def_readonly("hits_at_3", &LinkPredictionMetrics::hits_at_3)
      .def_readonly("hits_at_10", &LinkPredictionMetrics::hits_at_10)
      .def_readonly("count", &LinkPredictionMetrics::count);

  m.def("evaluate_link_prediction",
        [](const TrainResult& r, const std::vector<TripleTuple>& test, const std::vector<TripleTuple>& all) {
          return evaluate_link_prediction(r.params, to_triples(test), to_triples(all));
        });
  m.def("uniform_random_mrr", [](const std::vector<TripleTuple>& test, const std::vector<TripleTuple>& all,
                                 int num_entities) {
    return uniform_random_mrr(to_triples(test), to_triples(all), num_entities);
  });

  m.def(
      "similar_authors",
      [](std::vector<std::string> labels, Matrix vectors, const std::string& target,
         const std::vector<std::string>& candidates) {
        EntityEmbeddings emb(std::move(labels), std::move(vectors));
        std::vector<std::pair<std::string, double>> out;
        for (const auto& n : similar_authors(emb, target, candidates)) out.emplace_back(n.id, n.cosine);
        return out;
      },
      py::arg("labels"), py::arg("vectors"), py::arg("target"), py::arg("candidates"));

  py::class_<ExposureRatio>(m, "ExposureRatio")
      .def_readonly("percent", &ExposureRatio::percent)
      .def_readonly("count", &ExposureRatio::count)
      .def_readonly("pooled", &ExposureRatio::pooled)
      .def("__repr__", [](const ExposureRatio& r) { return exposure_cell(r); });

  m.def(
      "exposure_ratios",
      [](std::vector<std::string> labels, Matrix vectors, const std::map<std::string, std::string>& statuses,
         const std::vector<std::string>& sample, const std::vector<int>& k_levels) {
        EntityEmbeddings emb(std::move(labels), std::move(vectors));
        return exposure_ratios(emb, to_statuses(statuses), sample, k_levels).ratios;
      },
      py::arg("labels"), py::arg("vectors"), py::arg("statuses"), py::arg("sample"),
      py::arg("k_levels") = std::vector<int>{1, 5, 10});
  m.def(
      "draw_sample",
      [](const std::vector<std::string>& western_ids, std::size_t size, std::uint64_t seed) {
        return draw_sample(western_ids, size, seed);
      },
      py::arg("western_ids"), py::arg("size"), py::arg("seed"));

  m.def(
      "run_stage",
      [](const std::string& stage, const std::filesystem::path& config_path, std::optional<std::filesystem::path> out,
         std::optional<std::uint64_t> seed) {
        PipelineConfig config = PipelineConfig::load(config_path);
        if (out) config.out_dir = *out;
        if (seed) set_seed(config, *seed);
        std::vector<StageResult> results;
        if (stage == "all") {
          results = run_all(config);
        } else {
          results.push_back(run_stage(stage, config));
        }
        std::vector<std::string> warnings;
        for (const auto& r : results) warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
        return warnings;
      },
      py::arg("stage"), py::arg("config"), py::arg("out") = py::none(), py::arg("seed") = py::none(),
      "Runs one pipeline stage (or \"all\") and returns its warnings.");
}
