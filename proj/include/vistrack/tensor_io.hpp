#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vistrack/tensor.hpp"

namespace vistrack {

/// Binary tensor container, little-endian throughout:
///   magic "STEN" (4 bytes), version u8 = 1, entry count u16.
/// Per entry:
///   name length u16, UTF-8 name, dtype u8 (1 = 32-bit float),
///   ndim u8, dims as u32 each, then the raw row-major float payload.
/// Tensor3 entries serialize as [height, width, channels]; conv kernels as
/// [out, k_h, k_w, in] plus a rank-1 bias entry.
class TensorFileError : public std::runtime_error {
 public:
  enum class Code {
    io,
    bad_magic,
    bad_version,
    bad_dtype,
    truncated,
    bad_entry,
  };

  TensorFileError(Code code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct TensorEntry {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const;
};

/// Named entries in file order, with by-name lookup. Duplicate names are a
/// bad_entry error on load and on insert.
class TensorFile {
 public:
  void add(const std::string& name, TensorEntry entry);
  void add_tensor3(const std::string& name, const Tensor3& t);
  void add_kernel(const std::string& name, const ConvKernel& k);

  bool contains(const std::string& name) const;
  const TensorEntry& get(const std::string& name) const;
  Tensor3 get_tensor3(const std::string& name) const;
  ConvKernel get_kernel(const std::string& name) const;

  const std::vector<std::string>& names() const { return order_; }
  std::size_t size() const { return order_.size(); }

 private:
  std::vector<std::string> order_;
  std::map<std::string, TensorEntry> entries_;
};

TensorFile load_tensor_file(const std::filesystem::path& path);

/// Atomic write: temp file in the same directory, then rename.
void save_tensor_file(const std::filesystem::path& path,
                      const TensorFile& file);

}  // namespace vistrack
