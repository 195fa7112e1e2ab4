#include "hnet/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace hnet {

namespace {

constexpr std::uint32_t kMaxNameLen = 1u << 20;

void write_bytes(std::ofstream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out) throw CheckpointError(CheckpointError::Code::io, "checkpoint write failed");
}

void write_u8(std::ofstream& out, std::uint8_t v) { write_bytes(out, &v, 1); }

void write_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  write_bytes(out, b, 4);
}

void write_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  write_bytes(out, b, 8);
}

void write_f64(std::ofstream& out, double v) {
  write_u64(out, std::bit_cast<std::uint64_t>(v));
}

void read_bytes(std::ifstream& in, void* data, std::size_t n, const char* what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw CheckpointError(CheckpointError::Code::truncated,
                          std::string("checkpoint truncated while reading ") + what);
}

std::uint8_t read_u8(std::ifstream& in, const char* what) {
  std::uint8_t v = 0;
  read_bytes(in, &v, 1, what);
  return v;
}

std::uint32_t read_u32(std::ifstream& in, const char* what) {
  unsigned char b[4];
  read_bytes(in, b, 4, what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::ifstream& in, const char* what) {
  unsigned char b[8];
  read_bytes(in, b, 8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double read_f64(std::ifstream& in, const char* what) {
  return std::bit_cast<double>(read_u64(in, what));
}

}  // namespace

void save_checkpoint(const ParamStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw CheckpointError(CheckpointError::Code::io,
                          "cannot open checkpoint for writing: " + path.string());
  write_bytes(out, kCheckpointMagic, 4);
  write_u8(out, kCheckpointVersion);
  write_u32(out, static_cast<std::uint32_t>(store.size()));
  for (const auto& [name, tensor] : store.entries()) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    write_bytes(out, name.data(), name.size());
    const auto dims = tensor.dims();
    write_u32(out, static_cast<std::uint32_t>(dims.size()));
    for (std::uint32_t d : dims) write_u32(out, d);
  }
  for (const auto& [name, tensor] : store.entries()) {
    const Matrix& m = tensor.mat();
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) write_f64(out, m(r, c));
  }
  write_u64(out, store.rng_seed());
  out.flush();
  if (!out) throw CheckpointError(CheckpointError::Code::io, "checkpoint write failed");
}

ParamStore load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CheckpointError(CheckpointError::Code::io,
                          "cannot open checkpoint: " + path.string());
  char magic[4];
  read_bytes(in, magic, 4, "magic");
  if (std::memcmp(magic, kCheckpointMagic, 4) != 0)
    throw CheckpointError(CheckpointError::Code::bad_magic,
                          "bad magic in checkpoint: " + path.string());
  const std::uint8_t version = read_u8(in, "version");
  if (version != kCheckpointVersion)
    throw CheckpointError(CheckpointError::Code::bad_version,
                          "unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t count = read_u32(in, "entry count");

  struct Entry {
    std::string name;
    std::vector<std::uint32_t> dims;
  };
  std::vector<Entry> manifest;
  manifest.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = read_u32(in, "name length");
    if (name_len == 0 || name_len > kMaxNameLen)
      throw CheckpointError(CheckpointError::Code::malformed,
                            "implausible parameter name length");
    Entry entry;
    entry.name.resize(name_len);
    read_bytes(in, entry.name.data(), name_len, "name");
    const std::uint32_t rank = read_u32(in, "rank");
    if (rank != 1 && rank != 2)
      throw CheckpointError(CheckpointError::Code::malformed,
                            "unsupported tensor rank " + std::to_string(rank) +
                                " for " + entry.name);
    entry.dims.resize(rank);
    for (std::uint32_t d = 0; d < rank; ++d) entry.dims[d] = read_u32(in, "dims");
    manifest.push_back(std::move(entry));
  }

  ParamStore store;
  for (const Entry& entry : manifest) {
    Tensor t = entry.dims.size() == 1
                   ? Tensor::zeros_vector(entry.dims[0])
                   : Tensor::zeros_matrix(entry.dims[0], entry.dims[1]);
    Matrix& m = t.mat();
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) m(r, c) = read_f64(in, entry.name.c_str());
    store.add(entry.name, std::move(t));
  }
  store.set_rng_seed(read_u64(in, "rng seed"));

  char extra;
  in.read(&extra, 1);
  if (in.gcount() != 0)
    throw CheckpointError(CheckpointError::Code::malformed,
                          "trailing bytes after checkpoint payload");
  return store;
}

}  // namespace hnet
