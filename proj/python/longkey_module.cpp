#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>
#include <string>
#include <vector>

#include "longkey/baselines.hpp"
#include "longkey/cli.hpp"
#include "longkey/corpus.hpp"
#include "longkey/evaluation.hpp"
#include "longkey/model.hpp"
#include "longkey/pipeline.hpp"

namespace py = pybind11;
namespace lk = longkey;

namespace {

lk::corpus::Document document_from_text(const std::string& id, const std::string& text,
                                        const std::vector<std::string>& keyphrases) {
  lk::corpus::Document doc;
  doc.id = id;
  lk::corpus::segment_text(text, doc.words, doc.is_punct);
  std::vector<std::vector<std::string>> raw;
  for (const auto& phrase : keyphrases) {
    std::vector<std::string> units;
    std::vector<uint8_t> punct;
    lk::corpus::segment_text(phrase, units, punct);
    std::vector<std::string> kept;
    for (size_t i = 0; i < units.size(); ++i)
      if (!punct[i]) kept.push_back(units[i]);
    if (!kept.empty()) raw.push_back(std::move(kept));
  }
  doc.ground_truth = lk::corpus::dedup_ground_truth(raw);
  return doc;
}

using Triple = std::tuple<std::string, std::string, double>;

std::vector<Triple> to_triples(const std::vector<lk::model::RankedKeyphrase>& ranked) {
  std::vector<Triple> out;
  out.reserve(ranked.size());
  for (const auto& kp : ranked) out.emplace_back(kp.surface, kp.stemmed_key, kp.score);
  return out;
}

}  // namespace

PYBIND11_MODULE(longkey, m) {
  m.doc() = "Long-document keyphrase extraction: chunked encoding, span convolutions, "
            "max-pooled candidate embeddings, ranking/chunking training and evaluation.";

  m.def("stem_word", [](const std::string& w) { return lk::corpus::porter_stem(w); },
        py::arg("word"), "Porter stem of a lowercase word.");

  m.def(
      "normalize_keyphrase",
      [](const std::vector<std::string>& words) {
        return lk::corpus::normalize_keyphrase(words).stemmed_key;
      },
      py::arg("words"), "Lowercased, per-word-stemmed, space-joined candidate identity.");

  m.def(
      "segment_text",
      [](const std::string& text) {
        std::vector<std::string> words;
        std::vector<uint8_t> punct;
        lk::corpus::segment_text(text, words, punct);
        std::vector<std::pair<std::string, bool>> out;
        out.reserve(words.size());
        for (size_t i = 0; i < words.size(); ++i) out.emplace_back(words[i], punct[i] != 0);
        return out;
      },
      py::arg("text"), "Word units with punctuation flags.");

  m.def(
      "split_chunks",
      [](int total_tokens, int max_len) {
        return lk::chunking::split_chunks(total_tokens, max_len);
      },
      py::arg("total_tokens"), py::arg("max_len"),
      "Balanced half-open token ranges covering [0, total_tokens).");

  m.def(
      "prf_at_k",
      [](const std::vector<std::string>& predicted, const std::set<std::string>& truth, int k) {
        auto prf = lk::evaluation::prf_at_k(predicted, truth, k);
        return std::make_tuple(prf.precision, prf.recall, prf.f1);
      },
      py::arg("predicted"), py::arg("truth"), py::arg("k"));

  m.def(
      "f1_at_oracle",
      [](const std::vector<std::string>& predicted, const std::set<std::string>& truth) {
        return lk::evaluation::f1_at_oracle(predicted, truth);
      },
      py::arg("predicted"), py::arg("truth"));

  m.def(
      "evaluate",
      [](const std::vector<std::tuple<std::string, std::vector<std::string>,
                                      std::set<std::string>>>& docs,
         const std::vector<int>& ks, bool micro) {
        std::vector<lk::evaluation::DocEval> evals;
        evals.reserve(docs.size());
        for (const auto& [id, predicted, truth] : docs) evals.push_back({id, predicted, truth});
        lk::evaluation::EvalConfig cfg;
        cfg.ks = ks;
        cfg.micro = micro;
        return lk::evaluation::to_json_string(lk::evaluation::evaluate(evals, cfg));
      },
      py::arg("docs"), py::arg("ks"), py::arg("micro") = false,
      "Evaluate (id, ranked_keys, truth_keys) records; returns the report as JSON.");

  m.def(
      "textrank",
      [](const std::string& text, int n_max, int window, double damping) {
        auto doc = document_from_text("doc", text, {});
        lk::baselines::TextRankConfig cfg;
        cfg.window = window;
        cfg.damping = damping;
        return to_triples(lk::baselines::textrank_extract(doc, n_max, cfg));
      },
      py::arg("text"), py::arg("n_max") = 5, py::arg("window") = 4, py::arg("damping") = 0.85,
      "Ranked (surface, stemmed, score) keyphrases for one document.");

  m.def(
      "tfidf",
      [](const std::vector<std::string>& corpus_texts, int n_max) {
        std::vector<lk::corpus::Document> docs;
        docs.reserve(corpus_texts.size());
        for (size_t i = 0; i < corpus_texts.size(); ++i)
          docs.push_back(document_from_text(std::to_string(i), corpus_texts[i], {}));
        auto stats = lk::baselines::build_corpus_stats(docs);
        std::vector<std::vector<Triple>> out;
        out.reserve(docs.size());
        for (const auto& doc : docs)
          out.push_back(to_triples(lk::baselines::tfidf_extract(doc, stats, n_max)));
        return out;
      },
      py::arg("corpus_texts"), py::arg("n_max") = 5,
      "Per-document ranked (surface, stemmed, score) lists over a small corpus.");

  m.def(
      "train",
      [](const std::string& config_path) {
        if (lk::cli::cmd_train(config_path) != 0)
          throw std::runtime_error("training failed for config " + config_path);
      },
      py::arg("config_path"), "Run training from a JSON run config; writes the checkpoint.");

  m.def(
      "extract",
      [](const std::string& checkpoint, const std::string& input_jsonl, int top_k,
         const std::string& output_jsonl) {
        if (lk::cli::cmd_extract(checkpoint, input_jsonl, top_k, output_jsonl) != 0)
          throw std::runtime_error("extraction failed");
      },
      py::arg("checkpoint"), py::arg("input_jsonl"), py::arg("top_k"), py::arg("output_jsonl"));
}
