#include "gwlab/dataset.hpp"

#include <zlib.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "gwlab/error.hpp"

namespace gwlab {

namespace fs = std::filesystem;

const std::vector<KnownDataset>& known_datasets() {
  static const std::vector<KnownDataset> datasets = [] {
    std::vector<KnownDataset> d;
    d.push_back({"facebook", "facebook_combined.txt", "facebook_combined.txt.gz", "", 4039,
                 88234, false, {1, 2, 3, 4, 5, 6, 7, 8, 9}});
    // as-caida20071105 is the snapshot with 26,475 nodes / 53,381 undirected
    // edges. Its lines carry a third relationship column.
    d.push_back({"caida", "as-caida20071105.txt", "as-caida.tar.gz", "as-caida20071105.txt", 26475,
                 53381, true, {1, 5, 10, 15, 20, 25, 30, 35, 40, 45}});
    d.push_back({"arxiv", "ca-AstroPh.txt", "ca-AstroPh.txt.gz", "", 18772, 198110, false,
                 {10, 20, 30, 40, 50, 60, 70, 80, 90, 100}});
    return d;
  }();
  return datasets;
}

const KnownDataset* find_known_dataset(std::string_view name) {
  for (const auto& d : known_datasets())
    if (d.name == name) return &d;
  return nullptr;
}

fs::path default_cache_dir() {
  if (const char* dir = std::getenv("GWLAB_DATA_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "gwlab";
  if (const char* home = std::getenv("HOME"); home && *home)
    return fs::path(home) / ".cache" / "gwlab";
  return fs::current_path() / ".gwlab-cache";
}

std::string default_base_url() {
  if (const char* url = std::getenv("GWLAB_SNAP_BASE_URL"); url && *url) return url;
  return "https://snap.stanford.edu/data";
}

std::string gunzip_file(const fs::path& path) {
  gzFile in = gzopen(path.string().c_str(), "rb");
  if (!in) throw DatasetError("cannot open " + path.string());
  std::string out;
  char buffer[1 << 16];
  int read = 0;
  while ((read = gzread(in, buffer, sizeof buffer)) > 0) out.append(buffer, static_cast<std::size_t>(read));
  int err = 0;
  const char* msg = gzerror(in, &err);
  const std::string message = msg ? msg : "";
  gzclose(in);
  if (read < 0 || (err != Z_OK && err != Z_STREAM_END))
    throw DatasetError("corrupt gzip file " + path.string() + ": " + message);
  return out;
}

std::optional<std::string> tar_member(std::string_view archive, std::string_view member) {
  std::size_t pos = 0;
  while (pos + 512 <= archive.size()) {
    const std::string_view header = archive.substr(pos, 512);
    if (header.find_first_not_of('\0') == std::string_view::npos) break;
    std::string name(header.substr(0, 100).data(), strnlen(header.data(), 100));
    const std::string_view prefix = header.substr(345, 155);
    if (prefix.front() != '\0') name = std::string(prefix.data(), strnlen(prefix.data(), 155)) + "/" + name;
    std::size_t size = 0;
    for (char c : header.substr(124, 12)) {
      if (c >= '0' && c <= '7') size = size * 8 + static_cast<std::size_t>(c - '0');
    }
    const char type = header[156];
    pos += 512;
    if (pos + size > archive.size()) break;
    const bool regular = type == '0' || type == '\0';
    if (regular && name.size() >= member.size() &&
        name.compare(name.size() - member.size(), member.size(), member) == 0)
      return std::string(archive.substr(pos, size));
    pos += (size + 511) / 512 * 512;
  }
  return std::nullopt;
}

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw DatasetError("malformed URL " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

void download(const std::string& url, const fs::path& dest) {
  const Url parts = split_url(url);
  httplib::Client client(parts.origin);
  client.set_follow_location(true);
  client.set_connection_timeout(20);
  client.set_read_timeout(120);
  const fs::path partial = dest.string() + ".part";
  std::ofstream out(partial, std::ios::binary);
  if (!out) throw DatasetError("cannot write " + partial.string());
  auto res = client.Get(parts.path, [&](const char* data, std::size_t len) {
    out.write(data, static_cast<std::streamsize>(len));
    return static_cast<bool>(out);
  });
  out.close();
  if (!res || res->status != 200) {
    fs::remove(partial);
    const std::string why = res ? "HTTP status " + std::to_string(res->status)
                                : httplib::to_string(res.error());
    throw DatasetError(why);
  }
  fs::rename(partial, dest);
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path partial = path.string() + ".part";
  {
    std::ofstream out(partial, std::ios::binary);
    if (!out) throw DatasetError("cannot write " + partial.string());
    out << text;
  }
  fs::rename(partial, path);
}

}  // namespace

fs::path fetch_dataset(const KnownDataset& dataset, const FetchOptions& options) {
  const fs::path dir = options.cache_dir.value_or(default_cache_dir());
  const fs::path target = dir / dataset.file_name;
  if (fs::exists(target)) return target;

  const fs::path archive = dir / fs::path(dataset.remote_path).filename();
  const std::string url = options.base_url.value_or(default_base_url()) + "/" + dataset.remote_path;
  if (!fs::exists(archive)) {
    if (!options.allow_download)
      throw DatasetError("dataset '" + dataset.name + "' not cached at " + target.string());
    fs::create_directories(dir);
    try {
      download(url, archive);
    } catch (const DatasetError& e) {
      throw DatasetError("could not download " + url + " (" + e.what() +
                         "). Download it manually and place it at " + archive.string() +
                         " (or the decompressed file at " + target.string() +
                         "), or point GWLAB_DATA_DIR at a directory that holds it.");
    }
  }
  std::string content = gunzip_file(archive);
  if (!dataset.archive_member.empty()) {
    auto member = tar_member(content, dataset.archive_member);
    if (!member)
      throw DatasetError(archive.string() + " does not contain " + dataset.archive_member);
    content = std::move(*member);
  }
  write_text(target, content);
  return target;
}

LoadedGraph load_verified(const fs::path& path, std::size_t expected_nodes,
                          std::size_t expected_edges, bool allow_extra_columns,
                          std::string_view name) {
  EdgeListOptions opts;
  opts.allow_extra_columns = allow_extra_columns;
  LoadedGraph g = load_edge_list_file(path.string(), opts);
  const bool nodes_ok = expected_nodes == 0 || g.graph.node_count() == expected_nodes;
  const bool edges_ok = expected_edges == 0 || g.graph.edge_count() == expected_edges;
  if (!nodes_ok || !edges_ok) {
    std::ostringstream msg;
    msg << "dataset '" << name << "' at " << path.string() << " has " << g.graph.node_count()
        << " nodes / " << g.graph.edge_count() << " edges; expected " << expected_nodes
        << " nodes / " << expected_edges << " edges";
    throw DatasetError(msg.str());
  }
  return g;
}

}  // namespace gwlab
