// Copyright 2026 The endeval Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "endeval/metrics/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "endeval/common/error.hpp"

namespace endeval {

std::string format_fixed(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // Nudge by a relative epsilon so binary representation error (0.1235 stored
  // as 0.12349999...) rounds the way the decimal value would.
  double scaled = value * scale;
  scaled += std::copysign(std::abs(scaled) * 1e-12, scaled);
  double rounded = std::round(scaled) / scale;
  if (rounded == 0) rounded = 0;  // no "-0.000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  return buf;
}

namespace {

// "none" first, then numeric limits from loosest to tightest (none, 15, 10).
std::vector<std::string> ordered_conditions(const std::vector<EvalRun>& runs) {
  std::set<std::string> seen;
  for (const auto& r : runs) seen.insert(r.length_condition);
  std::vector<std::string> out(seen.begin(), seen.end());
  auto key = [](const std::string& c) {
    if (c == "none") return -1.0;
    try {
      return -1.0 / std::stod(c);
    } catch (const std::exception&) {
      return 0.0;
    }
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return out;
}

std::vector<std::string> ordered_models(const std::vector<EvalRun>& runs) {
  std::vector<std::string> out;
  for (const auto& r : runs)
    if (std::find(out.begin(), out.end(), r.generator_name) == out.end()) out.push_back(r.generator_name);
  return out;
}

std::string dis(const std::optional<double>& d) { return d ? format_fixed(*d, 3) : "n/a"; }

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string render_markdown_report(const std::vector<EvalRun>& runs) {
  std::ostringstream md;
  md << "# Instruction-following evaluation\n\n";
  for (const auto& cond : ordered_conditions(runs)) {
    md << "## IFSM and dissimilarity (length condition: " << cond << ")\n\n";
    md << "| Model | IFSM | Dissimilarity |\n|---|---|---|\n";
    for (const auto& r : runs)
      if (r.length_condition == cond)
        md << "| " << r.generator_name << " | " << format_fixed(r.ifsm, 3) << " | " << dis(r.dissimilarity) << " |\n";
    md << "\n";
  }

  auto conds = ordered_conditions(runs);
  md << "## Mean output length (words)\n\n| Model |";
  for (const auto& c : conds) md << " " << (c == "none" ? std::string("w/o") : "w/ " + c + " words") << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < conds.size(); ++i) md << "---|";
  md << "\n";
  for (const auto& m : ordered_models(runs)) {
    md << "| " << m << " |";
    for (const auto& c : conds) {
      auto it = std::find_if(runs.begin(), runs.end(),
                             [&](const EvalRun& r) { return r.generator_name == m && r.length_condition == c; });
      md << " " << (it == runs.end() ? std::string("-") : format_fixed(it->length_mean_words, 1)) << " |";
    }
    md << "\n";
  }

  md << "\n## Provenance\n\n| Model | Condition | n | Scorer | Split seed | Split manifest | Prompt | Embedder | Config |\n"
        "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : runs) {
    md << "| " << r.generator_name << " | " << r.length_condition << " | " << r.verdicts.size() << " | "
       << r.scorer_id << " | " << r.split_seed << " | " << r.manifest_hash.substr(0, 12) << " | "
       << r.prompt_version << " | " << (r.embedder_id.empty() ? "-" : r.embedder_id) << " | "
       << r.config_hash.substr(0, 12) << " |\n";
  }
  return md.str();
}

std::string render_ifsm_csv(const std::vector<EvalRun>& runs) {
  std::ostringstream out;
  out << "model,length_condition,ifsm,dissimilarity,scorer_id,split_seed,prompt_version,config_hash\n";
  for (const auto& r : runs) {
    out << csv_cell(r.generator_name) << "," << r.length_condition << "," << format_fixed(r.ifsm, 3) << ","
        << dis(r.dissimilarity) << "," << csv_cell(r.scorer_id) << "," << r.split_seed << ","
        << csv_cell(r.prompt_version) << "," << r.config_hash << "\n";
  }
  return out.str();
}

std::string render_length_csv(const std::vector<EvalRun>& runs) {
  auto conds = ordered_conditions(runs);
  std::ostringstream out;
  out << "model";
  for (const auto& c : conds) out << "," << c;
  out << "\n";
  for (const auto& m : ordered_models(runs)) {
    out << csv_cell(m);
    for (const auto& c : conds) {
      auto it = std::find_if(runs.begin(), runs.end(),
                             [&](const EvalRun& r) { return r.generator_name == m && r.length_condition == c; });
      out << "," << (it == runs.end() ? std::string() : format_fixed(it->length_mean_words, 1));
    }
    out << "\n";
  }
  return out.str();
}

std::vector<EvalRun> load_runs(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw NotFoundError("runs directory not found: " + dir.string());
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 15 && name.ends_with(".evalrun.jsonl")) paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<EvalRun> runs;
  for (const auto& p : paths) runs.push_back(load_eval_run(p));
  return runs;
}

std::string render_agreement_markdown(const AgreementReport& r, const std::string& title) {
  static const char* kNames[3] = {"Fluency", "Coherence", "Instruction Following"};
  std::ostringstream md;
  md << "| " << title << " | " << kNames[0] << " | " << kNames[1] << " | " << kNames[2] << " |\n|---|---|---|---|\n";
  auto row = [&](const char* label, const std::array<std::optional<double>, 3>& v) {
    md << "| " << label;
    for (const auto& x : v) md << " | " << (x ? format_fixed(*x, 2) : std::string("n/a"));
    md << " |\n";
  };
  row("Follow", r.follow_means);
  row("Not Follow", r.not_follow_means);
  row("Δ", r.delta);
  md << "\nTasks: " << r.follow_tasks << " Follow, " << r.not_follow_tasks << " Not Follow; annotators: "
     << r.annotators.size() << (r.partial ? " (partial)" : "") << "\n\n";
  md << "| Annotator agreement (Pearson r) | " << kNames[0] << " | " << kNames[1] << " | " << kNames[2]
     << " |\n|---|---|---|---|\n| r";
  for (const auto& p : r.pearson) md << " | " << (p ? format_fixed(*p, 2) : std::string("undefined"));
  md << " |\n";
  return md.str();
}

}  // namespace endeval
