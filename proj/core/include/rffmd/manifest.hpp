#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rffmd {

std::string sha256_file(const std::filesystem::path& path);

/// Writes "<out_dir>/manifest_<name>.txt": the config echo followed by one
/// "artifact <file> sha256=<hex>" line per artifact.
std::filesystem::path write_manifest(const std::filesystem::path& out_dir, const std::string& name,
                                     const std::string& config_echo,
                                     const std::vector<std::filesystem::path>& artifacts);

} // namespace rffmd
