// Copyright 2026 The birb-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "birb/metrics.hpp"

namespace birb::metrics {

using nlohmann::json;

void write_results_jsonl(const std::string& path, const std::vector<AucRecord>& records,
                         const std::vector<SkippedSpecies>& skipped) {
  std::ostringstream ss;
  for (const auto& r : records) {
    json row;
    row["type"] = "auc";
    row["species"] = r.species;
    row["corpus"] = r.corpus;
    row["provider_tag"] = r.provider_tag;
    row["k"] = r.k;
    row["effective_k"] = r.effective_k;
    row["sample"] = r.sample_index;
    row["roc_auc"] = r.roc_auc;
    row["n_pos"] = r.n_pos;
    row["n_neg"] = r.n_neg;
    ss << row.dump() << "\n";
  }
  for (const auto& s : skipped) {
    json row;
    row["type"] = "skipped";
    row["species"] = s.species;
    row["corpus"] = s.corpus;
    row["reason"] = s.reason;
    ss << row.dump() << "\n";
  }
  write_text_file(path, ss.str());
}

void read_results_jsonl(const std::string& path, std::vector<AucRecord>& records,
                        std::vector<SkippedSpecies>& skipped) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open results file: " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json row = json::parse(line);
      std::string type = row.value("type", "auc");
      if (type == "auc") {
        AucRecord r;
        r.species = row.at("species").get<std::string>();
        r.corpus = row.at("corpus").get<std::string>();
        r.provider_tag = row.value("provider_tag", "");
        r.k = row.at("k").get<int>();
        r.effective_k = row.value("effective_k", r.k);
        r.sample_index = row.at("sample").get<int>();
        r.roc_auc = row.at("roc_auc").get<double>();
        r.n_pos = row.value("n_pos", 0);
        r.n_neg = row.value("n_neg", 0);
        records.push_back(std::move(r));
      } else if (type == "skipped") {
        skipped.push_back({row.at("species").get<std::string>(),
                           row.at("corpus").get<std::string>(),
                           row.at("reason").get<std::string>()});
      } else {
        throw DataError(path + ":" + std::to_string(lineno) + ": unknown row type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": bad results row: " + e.what());
    }
  }
}

std::string report_to_json(const EvalReport& report) {
  json root;
  root["records"] = json::array();
  for (const auto& r : report.records) {
    json row;
    row["species"] = r.species;
    row["corpus"] = r.corpus;
    row["provider_tag"] = r.provider_tag;
    row["k"] = r.k;
    row["effective_k"] = r.effective_k;
    row["sample"] = r.sample_index;
    row["roc_auc"] = r.roc_auc;
    row["n_pos"] = r.n_pos;
    row["n_neg"] = r.n_neg;
    root["records"].push_back(row);
  }

  // nested as provider -> corpus -> k -> value; object keys are sorted, so
  // serialization is deterministic
  json per_species = json::object();
  for (const auto& [key, means] : report.per_species_mean) {
    json cell = json::object();
    for (const auto& [species, v] : means) cell[species] = v;
    per_species[key.provider_tag][key.corpus][std::to_string(key.k)] = cell;
  }
  root["per_species_mean"] = per_species;

  json croc = json::object();
  for (const auto& [key, v] : report.croc_auc)
    croc[key.provider_tag][key.corpus][std::to_string(key.k)] = v;
  root["croc_auc"] = croc;

  root["skipped_species"] = json::array();
  for (const auto& s : report.skipped_species) {
    json row;
    row["species"] = s.species;
    row["corpus"] = s.corpus;
    row["reason"] = s.reason;
    root["skipped_species"].push_back(row);
  }
  return root.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  // column per (corpus, k), row per provider
  std::set<std::pair<std::string, int>> columns;
  std::set<std::string> providers;
  for (const auto& [key, v] : report.croc_auc) {
    columns.insert({key.corpus, key.k});
    providers.insert(key.provider_tag);
  }
  std::ostringstream ss;
  ss << "model";
  for (const auto& [corpus, k] : columns) ss << "," << corpus << "/k=" << k;
  ss << "\n";
  char buf[32];
  for (const auto& provider : providers) {
    ss << provider;
    for (const auto& [corpus, k] : columns) {
      auto it = report.croc_auc.find(GroupKey{provider, corpus, k});
      if (it == report.croc_auc.end()) {
        ss << ",";
      } else {
        std::snprintf(buf, sizeof(buf), "%.6f", it->second);
        ss << "," << buf;
      }
    }
    ss << "\n";
  }
  return ss.str();
}

}  // namespace birb::metrics
