// Copyright 2026 The evil-toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <fstream>

#include "httplib.h"
#include "json.hpp"

#include "evil/metrics/bertscore.hpp"

namespace evil::metrics {

namespace {

using nlohmann::json;

double norm(const std::vector<float>& v) {
  double s = 0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

double cosine(const std::vector<float>& a, double na, const std::vector<float>& b, double nb) {
  if (na == 0 || nb == 0) return 0.0;
  double dot = 0;
  const auto n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) dot += static_cast<double>(a[i]) * b[i];
  return dot / (na * nb);
}

TokenEmbeddings embeddings_from_json(const json& j, std::size_t& dim) {
  if (!j.is_array()) throw ProviderError("embedding entry is not a list of vectors");
  TokenEmbeddings out;
  for (const auto& vec : j) {
    if (!vec.is_array()) throw ProviderError("token embedding is not a list of numbers");
    auto v = vec.get<std::vector<float>>();
    if (dim == 0) dim = v.size();
    if (v.size() != dim || dim == 0) throw ProviderError("embedding dimension is inconsistent");
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

double bert_score_f1(const TokenEmbeddings& candidate, const TokenEmbeddings& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  std::vector<double> cn, rn;
  for (const auto& v : candidate) cn.push_back(norm(v));
  for (const auto& v : reference) rn.push_back(norm(v));
  std::vector<double> best_for_ref(reference.size(), -1.0);
  double precision = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    double best = -1.0;
    for (std::size_t j = 0; j < reference.size(); ++j) {
      const double c = cosine(candidate[i], cn[i], reference[j], rn[j]);
      best = std::max(best, c);
      best_for_ref[j] = std::max(best_for_ref[j], c);
    }
    precision += best;
  }
  precision /= static_cast<double>(candidate.size());
  double recall = 0;
  for (double b : best_for_ref) recall += b;
  recall /= static_cast<double>(reference.size());
  if (precision + recall == 0) return 0.0;
  return 2 * precision * recall / (precision + recall);
}

double bert_score(const TokenEmbeddings& candidate, std::span<const TokenEmbeddings> references) {
  if (references.empty()) return 0.0;
  double best = -1.0;
  for (const auto& r : references) best = std::max(best, bert_score_f1(candidate, r));
  return best;
}

double bert_score(const std::string& candidate, std::span<const std::string> references,
                  EmbeddingProvider& provider) {
  std::vector<std::string> texts{candidate};
  texts.insert(texts.end(), references.begin(), references.end());
  auto emb = provider.embed(texts);
  if (emb.size() != texts.size()) throw ProviderError("provider returned the wrong number of texts");
  return bert_score(emb.front(), std::span(emb).subspan(1));
}

SidecarEmbeddingProvider::SidecarEmbeddingProvider(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open embedding sidecar " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ProviderError("embedding sidecar " + path.string() + ": " + e.what());
  }
  model_ = doc.value("model", "unspecified");
  if (!doc.contains("embeddings") || !doc["embeddings"].is_object()) {
    throw ProviderError("embedding sidecar " + path.string() + " has no embeddings object");
  }
  std::size_t dim = 0;
  for (const auto& [text, vectors] : doc["embeddings"].items()) {
    table_.emplace(text, embeddings_from_json(vectors, dim));
  }
}

std::vector<TokenEmbeddings> SidecarEmbeddingProvider::embed(std::span<const std::string> texts) {
  std::vector<TokenEmbeddings> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto it = table_.find(t);
    if (it == table_.end()) throw ProviderError("no precomputed embeddings for \"" + t + "\"");
    out.push_back(it->second);
  }
  return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string url, std::string model)
    : model_(std::move(model)) {
  const auto scheme = url.find("://");
  const auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  origin_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

std::vector<TokenEmbeddings> HttpEmbeddingProvider::embed(std::span<const std::string> texts) {
  httplib::Client client(origin_);
  client.set_read_timeout(120);
  const json request = {{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  auto res = client.Post(path_, request.dump(), "application/json");
  if (!res) throw ProviderError("embedding request to " + origin_ + path_ + " failed: " +
                                httplib::to_string(res.error()));
  if (res->status != 200) {
    throw ProviderError("embedding endpoint answered HTTP " + std::to_string(res->status));
  }
  json body;
  try {
    body = json::parse(res->body);
  } catch (const json::exception& e) {
    throw ProviderError(std::string("embedding response is not JSON: ") + e.what());
  }
  const json& list = body.is_object() ? body.value("embeddings", json()) : body;
  if (!list.is_array() || list.size() != texts.size()) {
    throw ProviderError("embedding response does not hold one entry per text");
  }
  std::vector<TokenEmbeddings> out;
  std::size_t dim = 0;
  for (const auto& entry : list) out.push_back(embeddings_from_json(entry, dim));
  return out;
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const std::string& spec) {
  if (spec.starts_with("https://")) {
    throw ProviderError("https embedding endpoints are not supported; use http://");
  }
  if (spec.starts_with("http://")) return std::make_unique<HttpEmbeddingProvider>(spec);
  return std::make_unique<SidecarEmbeddingProvider>(spec);
}

}  // namespace evil::metrics
