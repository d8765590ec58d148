#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nblink/dataset.hpp"

namespace nblink::persist {

inline constexpr const char* kDatasetHeader = "t_ms,dir,alpha,prb_norm,mcs_norm,rep_norm,sinr_db,plr";

std::string format_dataset(const std::vector<DatasetRecord>& records);

/// Throws std::runtime_error with the line number on a malformed or invalid
/// record, including unscheduled records that carry marks.
std::vector<DatasetRecord> parse_dataset(const std::string& text);

void save_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path);

}  // namespace nblink::persist
