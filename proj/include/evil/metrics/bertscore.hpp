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

#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "evil/error.hpp"

namespace evil::metrics {

// One vector per token; all vectors of a provider share one dimension.
using TokenEmbeddings = std::vector<std::vector<float>>;

// The provider could not deliver embeddings.
class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what) : Error(what) {}
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  // Returns one entry per text, in order. Throws ProviderError.
  virtual std::vector<TokenEmbeddings> embed(std::span<const std::string> texts) = 0;

  // Opaque model identity, e.g. "distilbert-base-uncased".
  virtual std::string model() const = 0;
};

// Greedy cosine matching in both directions. 0 when either side is empty.
double bert_score_f1(const TokenEmbeddings& candidate, const TokenEmbeddings& reference);

// Maximum F1 over references.
double bert_score(const TokenEmbeddings& candidate, std::span<const TokenEmbeddings> references);

// Convenience wrapper issuing a single provider call.
double bert_score(const std::string& candidate, std::span<const std::string> references,
                  EmbeddingProvider& provider);

// Reads precomputed vectors from a JSON sidecar:
//   {"model": "...", "embeddings": {"<text>": [[f, ...], ...], ...}}
class SidecarEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit SidecarEmbeddingProvider(const std::filesystem::path& path);

  std::vector<TokenEmbeddings> embed(std::span<const std::string> texts) override;
  std::string model() const override { return model_; }

 private:
  std::string model_;
  std::unordered_map<std::string, TokenEmbeddings> table_;
};

// POSTs {"texts": [...]} to an HTTP endpoint and expects
// {"embeddings": [[[f, ...], ...], ...]} (or the bare array) back.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(std::string url, std::string model = "unspecified");

  std::vector<TokenEmbeddings> embed(std::span<const std::string> texts) override;
  std::string model() const override { return model_; }

 private:
  std::string origin_;
  std::string path_;
  std::string model_;
};

// "http://..." selects the HTTP provider, anything else is a sidecar path.
// TLS endpoints are rejected because the build carries no TLS backend.
std::unique_ptr<EmbeddingProvider> make_embedding_provider(const std::string& spec);

}  // namespace evil::metrics
