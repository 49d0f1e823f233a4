// Copyright 2026 The UNER Corpus Authors.
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

#ifndef UNER_LINKER_H_
#define UNER_LINKER_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uner/error.h"

namespace uner {

inline constexpr std::string_view kDefaultResourceBase =
    "http://dbpedia.org/resource";
inline constexpr std::string_view kDefaultEndpoint =
    "https://dbpedia.org/sparql";
inline constexpr std::string_view kEndpointEnvVar = "UNER_SPARQL_ENDPOINT";

struct EntityUri {
  std::string uri;

  bool operator==(const EntityUri&) const = default;
};

// resource_base + "/" + target, spaces as underscores, reserved ASCII
// characters percent-encoded. Throws DataError on an empty target.
EntityUri BuildEntityUri(std::string_view target,
                         std::string_view resource_base);

// Inverse of BuildEntityUri. Underscores decode to spaces, which is the
// encyclopedia's own title normalization.
std::string TargetFromUri(std::string_view uri, std::string_view resource_base);

// Link target -> knowledge-base classes in canonical (first retrieval)
// order. Class lists never contain duplicates.
class ClassCatalog {
 public:
  using Entries = std::map<std::string, std::vector<std::string>>;

  // Stores `classes` with duplicates removed (first occurrence kept).
  void Set(std::string target, std::vector<std::string> classes);
  const std::vector<std::string>* Find(std::string_view target) const;
  bool Contains(std::string_view target) const {
    return Find(target) != nullptr;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entries& entries() const { return entries_; }

  // Entries for the given targets only.
  ClassCatalog Restrict(std::span<const std::string> targets) const;

  // TSV: target<TAB>class1,class2,... ; '#' starts a comment line.
  static ClassCatalog Parse(std::istream& in, std::string_view source);
  static ClassCatalog Load(const std::filesystem::path& path);
  void Save(std::ostream& out) const;

  bool operator==(const ClassCatalog&) const = default;

 private:
  Entries entries_;
};

// ---------------------------------------------------------------------------
// SPARQL access.

class TransportError : public Error {
 public:
  using Error::Error;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Sends one SPARQL query. Throws TransportError when no response arrives.
class SparqlTransport {
 public:
  virtual ~SparqlTransport() = default;
  virtual HttpResponse Get(const std::string& endpoint,
                           const std::string& query,
                           std::chrono::milliseconds timeout) = 0;
};

// HTTP GET with `query` and `format` parameters and a JSON Accept header.
std::unique_ptr<SparqlTransport> MakeHttpTransport();

class Clock {
 public:
  using TimePoint = std::chrono::steady_clock::time_point;
  virtual ~Clock() = default;
  virtual TimePoint Now() = 0;
  virtual void SleepUntil(TimePoint t) = 0;
};

Clock& SystemClock();

// Spaces request start times at least 1/rate apart. Thread-safe.
class RateLimiter {
 public:
  RateLimiter(double requests_per_second, Clock& clock);
  void Acquire();

 private:
  Clock& clock_;
  std::chrono::nanoseconds interval_;
  std::mutex mu_;
  Clock::TimePoint next_slot_{};
  bool started_ = false;
};

// Raised after every retry for a query has failed.
class TransientQueryError : public Error {
 public:
  TransientQueryError(const std::string& what, std::string target)
      : Error(what), target_(std::move(target)) {}
  const std::string& target() const { return target_; }

 private:
  std::string target_;
};

struct SparqlOptions {
  std::string endpoint{kDefaultEndpoint};
  std::string resource_base{kDefaultResourceBase};
  std::chrono::milliseconds timeout{10000};
  int retries = 3;
  double requests_per_second = 5.0;
};

// Query selecting (?entity, ?type) for every rdf:type of the given entities.
std::string BuildClassQuery(std::span<const EntityUri> uris);

// Parses SPARQL JSON results of BuildClassQuery into uri -> classes, in
// binding order. Throws DataError on malformed JSON.
std::map<std::string, std::vector<std::string>> ParseClassBindings(
    std::string_view body);

// Shortens well-known namespace URIs to prefixed names (dbo:, owl:, ...).
std::string CompactClassName(std::string_view uri);

class SparqlClient {
 public:
  SparqlClient(SparqlTransport& transport, SparqlOptions options,
               Clock& clock = SystemClock());

  // Classes of one entity in response order; empty for an unknown entity.
  std::vector<std::string> QueryClasses(const EntityUri& uri);

  // uri -> classes for each requested uri (empty when unknown).
  std::map<std::string, std::vector<std::string>> QueryBatch(
      std::span<const EntityUri> uris);

  const SparqlOptions& options() const { return options_; }
  std::size_t requests() const { return requests_; }
  std::size_t failed_requests() const { return failed_requests_; }

 private:
  std::string Execute(const std::string& query, const std::string& label);

  SparqlTransport& transport_;
  SparqlOptions options_;
  RateLimiter limiter_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> failed_requests_{0};
};

struct ResolveOptions {
  std::size_t batch_size = 50;
  std::size_t concurrency = 4;
};

struct ResolveResult {
  // Entries for every target found in the cache or resolved remotely.
  ClassCatalog catalog;
  std::vector<std::string> unresolved;
  std::size_t cache_hits = 0;
  // Entities sent to the endpoint (a batch of k counts k).
  std::size_t entities_queried = 0;
  std::size_t entities_resolved_remotely = 0;
  std::size_t requests = 0;
  std::size_t failed_requests = 0;
};

// Resolves `targets` against `cache`, querying `client` (if any) for misses.
// Newly resolved entries are added to `cache`; unresolved targets are
// recorded, never fatal. Batches that fail fall back to single queries.
ResolveResult ResolveAll(std::span<const std::string> targets,
                         ClassCatalog& cache, SparqlClient* client,
                         const ResolveOptions& options = {});

}  // namespace uner

#endif  // UNER_LINKER_H_
