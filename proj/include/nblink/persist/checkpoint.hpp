#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "nblink/tpp_gan/params.hpp"

namespace nblink::persist {

inline constexpr const char* kCheckpointMagic = "SMARTCON-CKPT v1";

/// Text checkpoint: magic line, "H=<n> mu=<f> beta=<f>", then per tensor a
/// "name rows cols" header and its rows. Values use 17 significant digits
/// so a read-write cycle is byte-identical.
std::string format_checkpoint(const tpp::GanParamsd& p);

/// Throws std::runtime_error on a version, layout or dimension problem. When
/// expected_hidden is given the stored width must match it.
tpp::GanParamsd parse_checkpoint(const std::string& text,
                                 std::optional<Eigen::Index> expected_hidden = std::nullopt);

void save_checkpoint(const std::filesystem::path& path, const tpp::GanParamsd& p);
tpp::GanParamsd load_checkpoint(const std::filesystem::path& path,
                                std::optional<Eigen::Index> expected_hidden = std::nullopt);

}  // namespace nblink::persist
