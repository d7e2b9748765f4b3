#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sleepgraph/hypnogram.hpp"
#include "sleepgraph/util.hpp"

namespace sleepgraph {

// Labeled collection of recordings, assembled in manifest order.
struct CohortDataset {
  std::vector<Hypnogram> recordings;
  std::string manifest_path;
  std::string manifest_digest;  // fnv1a64 of the manifest bytes
};

inline std::vector<const Hypnogram*> cohort_slice(const CohortDataset& d, Cohort c) {
  std::vector<const Hypnogram*> out;
  for (const Hypnogram& h : d.recordings)
    if (h.cohort == c) out.push_back(&h);
  return out;
}

inline bool has_both_cohorts(const CohortDataset& d) {
  bool p = false, h = false;
  for (const Hypnogram& r : d.recordings) (r.cohort == Cohort::patient ? p : h) = true;
  return p && h;
}

// Manifest format: JSON array of {"path", "subject_id", "cohort"} with
// cohort in {"patient","healthy"}. Relative paths resolve against the
// manifest's directory.
inline CohortDataset load_manifest_text(const std::string& json_text,
                                        const std::filesystem::path& base_dir,
                                        std::string manifest_path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error("manifest " + manifest_path + ": invalid JSON: " + e.what());
  }
  if (!doc.is_array())
    throw input_error("manifest " + manifest_path + ": expected a JSON array");

  CohortDataset ds;
  ds.manifest_path = std::move(manifest_path);
  ds.manifest_digest = fnv1a64_hex(json_text);

  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    if (!entry.is_object() || !entry.contains("path") || !entry.contains("subject_id") ||
        !entry.contains("cohort"))
      throw input_error("manifest " + ds.manifest_path + ": entry " + std::to_string(i) +
                        " must have path, subject_id and cohort");
    const std::string path = entry.at("path").get<std::string>();
    const std::string subject_id = entry.at("subject_id").get<std::string>();
    const std::string cohort_label = entry.at("cohort").get<std::string>();

    const auto cohort = parse_cohort(cohort_label);
    if (!cohort)
      throw input_error("manifest " + ds.manifest_path + ": invalid cohort label '" +
                        cohort_label + "' for subject " + subject_id);
    if (!seen_ids.insert(subject_id).second)
      throw input_error("manifest " + ds.manifest_path + ": duplicate subject_id '" +
                        subject_id + "'");

    std::filesystem::path file(path);
    if (file.is_relative()) file = base_dir / file;
    if (!std::filesystem::exists(file))
      throw input_error("manifest " + ds.manifest_path + ": missing file " + file.string());

    ds.recordings.push_back(parse_hypnogram(read_file(file), subject_id, *cohort));
  }
  return ds;
}

inline CohortDataset load_manifest(const std::filesystem::path& manifest_file) {
  return load_manifest_text(read_file(manifest_file), manifest_file.parent_path(),
                            manifest_file.string());
}

}  // namespace sleepgraph
