#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwlab/graph.hpp"

namespace gwlab {

/// One of the public SNAP graphs used by the default experiments.
struct KnownDataset {
  std::string name;          // facebook | caida | arxiv
  std::string file_name;     // uncompressed edge list inside the cache
  std::string remote_path;   // path below the SNAP base URL
  std::string archive_member;  // non-empty when remote file is a .tar.gz
  std::size_t expected_nodes = 0;
  std::size_t expected_edges = 0;
  bool allow_extra_columns = false;
  std::vector<std::size_t> default_flip_levels;
};

const std::vector<KnownDataset>& known_datasets();
const KnownDataset* find_known_dataset(std::string_view name);

/// $GWLAB_DATA_DIR, else $XDG_CACHE_HOME/gwlab, else $HOME/.cache/gwlab.
std::filesystem::path default_cache_dir();

/// $GWLAB_SNAP_BASE_URL, else https://snap.stanford.edu/data.
std::string default_base_url();

struct FetchOptions {
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::string> base_url;
  bool allow_download = true;
};

/// Returns the local uncompressed edge list for a known dataset: reuses the
/// cache, else decompresses a cached download, else downloads it. Throws
/// DatasetError with manual-download instructions on failure.
std::filesystem::path fetch_dataset(const KnownDataset& dataset, const FetchOptions& options = {});

/// Loads a dataset file and verifies its node/edge counts (0 = unchecked).
/// Throws DatasetError on a mismatch.
LoadedGraph load_verified(const std::filesystem::path& path, std::size_t expected_nodes,
                          std::size_t expected_edges, bool allow_extra_columns,
                          std::string_view name);

/// Gunzips a whole file into memory.
std::string gunzip_file(const std::filesystem::path& path);

/// Extracts the member whose name ends with `member` from an uncompressed
/// ustar archive image.
std::optional<std::string> tar_member(std::string_view archive, std::string_view member);

}  // namespace gwlab
