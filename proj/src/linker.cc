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

#include "uner/linker.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "uner/text_util.h"

namespace uner {
namespace {

using json = nlohmann::json;

// ASCII characters left as-is in a resource URI besides letters and digits.
constexpr std::string_view kUriSafe = "-._~()!*',:;@/";

const std::vector<std::pair<std::string_view, std::string_view>>&
NamespacePrefixes() {
  static const std::vector<std::pair<std::string_view, std::string_view>>
      kPrefixes = {
          {"http://dbpedia.org/ontology/", "dbo:"},
          {"http://www.w3.org/2002/07/owl#", "owl:"},
          {"http://schema.org/", "schema:"},
          {"http://www.wikidata.org/entity/", "wikidata:"},
          {"http://xmlns.com/foaf/0.1/", "foaf:"},
          {"http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#", "dul:"},
          {"http://dbpedia.org/class/yago/", "yago:"},
          {"http://umbel.org/umbel/rc/", "umbel-rc:"},
          {"http://www.w3.org/2003/01/geo/wgs84_pos#", "geo:"},
      };
  return kPrefixes;
}

class SteadyClock : public Clock {
 public:
  TimePoint Now() override { return std::chrono::steady_clock::now(); }
  void SleepUntil(TimePoint t) override { std::this_thread::sleep_until(t); }
};

class HttplibTransport : public SparqlTransport {
 public:
  HttpResponse Get(const std::string& endpoint, const std::string& query,
                   std::chrono::milliseconds timeout) override {
    // Split "scheme://host[:port]/path".
    const std::size_t scheme_end = endpoint.find("://");
    const std::size_t path_start =
        scheme_end == std::string::npos
            ? std::string::npos
            : endpoint.find('/', scheme_end + 3);
    const std::string origin = endpoint.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : endpoint.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_follow_location(false);
    const httplib::Params params = {{"query", query},
                                    {"format", "application/sparql-results+json"}};
    const httplib::Headers headers = {
        {"Accept", "application/sparql-results+json"}};
    httplib::Result result = client.Get(path, params, headers);
    if (!result) {
      throw TransportError("request to " + endpoint + " failed: " +
                           httplib::to_string(result.error()));
    }
    return HttpResponse{result->status, result->body};
  }
};

}  // namespace

EntityUri BuildEntityUri(std::string_view target,
                         std::string_view resource_base) {
  if (target.empty()) throw DataError("cannot build a URI for an empty target");
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string uri(resource_base);
  uri.push_back('/');
  for (char ch : target) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == ' ') {
      uri.push_back('_');
    } else if (c >= 0x80 || std::isalnum(c) ||
               kUriSafe.find(ch) != std::string_view::npos) {
      // Non-ASCII bytes stay raw: the knowledge base keys resources by IRI.
      uri.push_back(ch);
    } else {
      uri.push_back('%');
      uri.push_back(kHex[c >> 4]);
      uri.push_back(kHex[c & 0xF]);
    }
  }
  return EntityUri{std::move(uri)};
}

std::string TargetFromUri(std::string_view uri,
                          std::string_view resource_base) {
  std::string_view local = uri;
  if (local.substr(0, resource_base.size()) == resource_base) {
    local.remove_prefix(resource_base.size());
    if (!local.empty() && local.front() == '/') local.remove_prefix(1);
  }
  std::string spaced(local);
  std::replace(spaced.begin(), spaced.end(), '_', ' ');
  return PercentDecode(spaced);
}

void ClassCatalog::Set(std::string target, std::vector<std::string> classes) {
  if (target.empty() || target.find_first_of("\t\n\r") != std::string::npos) {
    throw DataError("invalid catalog target '" + target + "'");
  }
  std::vector<std::string> unique;
  std::unordered_set<std::string> seen;
  for (std::string& cls : classes) {
    if (cls.empty() || cls.find_first_of(",\t\n\r") != std::string::npos) {
      throw DataError("invalid class name '" + cls + "' for " + target);
    }
    if (seen.insert(cls).second) unique.push_back(std::move(cls));
  }
  entries_[std::move(target)] = std::move(unique);
}

const std::vector<std::string>* ClassCatalog::Find(
    std::string_view target) const {
  auto it = entries_.find(std::string(target));
  return it == entries_.end() ? nullptr : &it->second;
}

ClassCatalog ClassCatalog::Restrict(
    std::span<const std::string> targets) const {
  ClassCatalog out;
  for (const std::string& target : targets) {
    if (const auto* classes = Find(target)) out.entries_[target] = *classes;
  }
  return out;
}

ClassCatalog ClassCatalog::Parse(std::istream& in, std::string_view source) {
  ClassCatalog catalog;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    const std::string where =
        std::string(source) + ":" + std::to_string(line_number) + ": ";
    if (tab == std::string::npos) {
      throw DataError(where + "expected target<TAB>classes");
    }
    std::string target = line.substr(0, tab);
    if (catalog.Contains(target)) {
      throw DataError(where + "duplicate target " + target);
    }
    std::vector<std::string> classes;
    const std::string list = line.substr(tab + 1);
    if (!list.empty()) classes = SplitString(list, ',');
    catalog.Set(std::move(target), std::move(classes));
  }
  if (in.bad()) throw IoError(std::string(source) + ": read failure", line_number);
  return catalog;
}

ClassCatalog ClassCatalog::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string(), 0);
  return Parse(in, path.string());
}

void ClassCatalog::Save(std::ostream& out) const {
  out << "# target\tclasses (canonical order)\n";
  for (const auto& [target, classes] : entries_) {
    out << target << '\t' << JoinStrings(classes, ",") << '\n';
  }
}

std::unique_ptr<SparqlTransport> MakeHttpTransport() {
  return std::make_unique<HttplibTransport>();
}

Clock& SystemClock() {
  static SteadyClock clock;
  return clock;
}

RateLimiter::RateLimiter(double requests_per_second, Clock& clock)
    : clock_(clock),
      interval_(requests_per_second > 0
                    ? std::chrono::nanoseconds(static_cast<long long>(
                          1e9 / requests_per_second))
                    : std::chrono::nanoseconds(0)) {}

void RateLimiter::Acquire() {
  Clock::TimePoint slot;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const Clock::TimePoint now = clock_.Now();
    slot = (!started_ || next_slot_ < now) ? now : next_slot_;
    started_ = true;
    next_slot_ = slot + interval_;
  }
  if (slot > clock_.Now()) clock_.SleepUntil(slot);
}

std::string BuildClassQuery(std::span<const EntityUri> uris) {
  std::string query = "SELECT ?entity ?type WHERE {\n  VALUES ?entity {";
  for (const EntityUri& uri : uris) {
    query += " <" + uri.uri + ">";
  }
  query +=
      " }\n  ?entity <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> ?type "
      ".\n}";
  return query;
}

std::map<std::string, std::vector<std::string>> ParseClassBindings(
    std::string_view body) {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (!doc.is_object()) throw DataError("SPARQL response is not JSON");
  std::map<std::string, std::vector<std::string>> out;
  try {
    for (const json& binding : doc.at("results").at("bindings")) {
      const std::string entity =
          binding.at("entity").at("value").get<std::string>();
      const std::string type = binding.at("type").at("value").get<std::string>();
      out[entity].push_back(CompactClassName(type));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("unexpected SPARQL response: ") + e.what());
  }
  return out;
}

std::string CompactClassName(std::string_view uri) {
  for (const auto& [ns, prefix] : NamespacePrefixes()) {
    if (uri.substr(0, ns.size()) == ns) {
      return std::string(prefix) + std::string(uri.substr(ns.size()));
    }
  }
  return std::string(uri);
}

SparqlClient::SparqlClient(SparqlTransport& transport, SparqlOptions options,
                           Clock& clock)
    : transport_(transport),
      options_(std::move(options)),
      limiter_(options_.requests_per_second, clock) {}

std::string SparqlClient::Execute(const std::string& query,
                                  const std::string& label) {
  std::string last_error;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    limiter_.Acquire();
    ++requests_;
    try {
      HttpResponse response =
          transport_.Get(options_.endpoint, query, options_.timeout);
      if (response.status == 200) {
        ParseClassBindings(response.body);  // Validate before accepting.
        return std::move(response.body);
      }
      last_error = "HTTP status " + std::to_string(response.status);
    } catch (const TransportError& e) {
      last_error = e.what();
    } catch (const DataError& e) {
      last_error = e.what();
    }
    ++failed_requests_;
  }
  throw TransientQueryError("query for " + label + " failed after " +
                                std::to_string(options_.retries + 1) +
                                " attempts: " + last_error,
                            label);
}

std::vector<std::string> SparqlClient::QueryClasses(const EntityUri& uri) {
  const EntityUri uris[] = {uri};
  auto bindings = ParseClassBindings(
      Execute(BuildClassQuery(uris),
              TargetFromUri(uri.uri, options_.resource_base)));
  // With a single entity every binding belongs to it, whatever IRI form the
  // endpoint echoes back.
  std::vector<std::string> classes;
  if (auto it = bindings.find(uri.uri); it != bindings.end()) {
    return std::move(it->second);
  }
  for (auto& [entity, types] : bindings) {
    classes.insert(classes.end(), types.begin(), types.end());
  }
  return classes;
}

std::map<std::string, std::vector<std::string>> SparqlClient::QueryBatch(
    std::span<const EntityUri> uris) {
  std::string label = "batch of " + std::to_string(uris.size());
  if (uris.size() == 1) label = TargetFromUri(uris[0].uri, options_.resource_base);
  auto bindings = ParseClassBindings(Execute(BuildClassQuery(uris), label));
  std::map<std::string, std::vector<std::string>> out;
  for (const EntityUri& uri : uris) {
    auto it = bindings.find(uri.uri);
    out[uri.uri] =
        it == bindings.end() ? std::vector<std::string>{} : std::move(it->second);
  }
  return out;
}

ResolveResult ResolveAll(std::span<const std::string> targets,
                         ClassCatalog& cache, SparqlClient* client,
                         const ResolveOptions& options) {
  ResolveResult result;
  std::vector<std::string> misses;
  for (const std::string& target : targets) {
    if (cache.Contains(target)) {
      ++result.cache_hits;
    } else {
      misses.push_back(target);
    }
  }

  if (client == nullptr) {
    result.unresolved = std::move(misses);
  } else if (!misses.empty()) {
    const std::size_t batch_size = std::max<std::size_t>(1, options.batch_size);
    const std::size_t batches = (misses.size() + batch_size - 1) / batch_size;
    // Per-batch outcome: classes for each target, nullopt when unresolved.
    std::vector<std::vector<std::optional<std::vector<std::string>>>> outcomes(
        batches);
    std::atomic<std::size_t> next_batch{0};
    const std::string& base = client->options().resource_base;

    auto worker = [&] {
      for (std::size_t b = next_batch++; b < batches; b = next_batch++) {
        const std::size_t begin = b * batch_size;
        const std::size_t end = std::min(misses.size(), begin + batch_size);
        std::vector<EntityUri> uris;
        for (std::size_t i = begin; i < end; ++i) {
          uris.push_back(BuildEntityUri(misses[i], base));
        }
        auto& outcome = outcomes[b];
        outcome.resize(end - begin);
        try {
          auto classes = client->QueryBatch(uris);
          for (std::size_t i = 0; i < uris.size(); ++i) {
            outcome[i] = std::move(classes[uris[i].uri]);
          }
          continue;
        } catch (const TransientQueryError&) {
          if (uris.size() == 1) continue;
        }
        for (std::size_t i = 0; i < uris.size(); ++i) {
          try {
            outcome[i] = client->QueryClasses(uris[i]);
          } catch (const TransientQueryError&) {
          }
        }
      }
    };

    const std::size_t workers =
        std::clamp<std::size_t>(options.concurrency, 1, batches);
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    result.entities_queried = misses.size();
    // Single writer: merge in target order.
    for (std::size_t b = 0; b < batches; ++b) {
      for (std::size_t i = 0; i < outcomes[b].size(); ++i) {
        const std::string& target = misses[b * batch_size + i];
        if (outcomes[b][i]) {
          cache.Set(target, std::move(*outcomes[b][i]));
          ++result.entities_resolved_remotely;
        } else {
          result.unresolved.push_back(target);
        }
      }
    }
    result.requests = client->requests();
    result.failed_requests = client->failed_requests();
  }

  result.catalog = cache.Restrict(targets);
  return result;
}

}  // namespace uner
