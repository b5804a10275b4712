#include "vistrack/tensor_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

namespace vistrack {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'E', 'N'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kDtypeF32 = 1;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const unsigned char* data, std::size_t size)
      : data_(data), size_(size) {}

  void need(std::size_t n, const char* what) {
    if (pos_ + n > size_)
      throw TensorFileError(TensorFileError::Code::truncated,
                            std::string("tensor file truncated reading ") +
                                what);
  }

  std::uint8_t u8(const char* what) {
    need(1, what);
    return data_[pos_++];
  }

  std::uint16_t u16(const char* what) {
    need(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(data_[pos_]) |
                      static_cast<std::uint16_t>(data_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  const unsigned char* bytes(std::size_t n, const char* what) {
    need(n, what);
    const unsigned char* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  std::size_t pos() const { return pos_; }
  std::size_t size() const { return size_; }

 private:
  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t TensorEntry::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

void TensorFile::add(const std::string& name, TensorEntry entry) {
  if (name.empty())
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "tensor entry name must be non-empty");
  if (name.size() > std::numeric_limits<std::uint16_t>::max())
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "tensor entry name too long: " + name);
  if (entries_.count(name))
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "duplicate tensor entry: " + name);
  if (entry.dims.empty() || entry.dims.size() > 255)
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "tensor entry rank out of range: " + name);
  for (std::uint32_t d : entry.dims)
    if (d == 0)
      throw TensorFileError(TensorFileError::Code::bad_entry,
                            "zero-sized dimension in entry: " + name);
  if (entry.data.size() != entry.element_count())
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "entry data does not match dims: " + name);
  order_.push_back(name);
  entries_.emplace(name, std::move(entry));
}

void TensorFile::add_tensor3(const std::string& name, const Tensor3& t) {
  TensorEntry e;
  e.dims = {static_cast<std::uint32_t>(t.height),
            static_cast<std::uint32_t>(t.width),
            static_cast<std::uint32_t>(t.channels)};
  e.data = t.data;
  add(name, std::move(e));
}

void TensorFile::add_kernel(const std::string& name, const ConvKernel& k) {
  TensorEntry w;
  w.dims = {static_cast<std::uint32_t>(k.out_channels),
            static_cast<std::uint32_t>(k.k_h),
            static_cast<std::uint32_t>(k.k_w),
            static_cast<std::uint32_t>(k.in_channels)};
  w.data = k.weights;
  add(name + "_weight", std::move(w));
  TensorEntry b;
  b.dims = {static_cast<std::uint32_t>(k.out_channels)};
  b.data = k.bias;
  add(name + "_bias", std::move(b));
}

bool TensorFile::contains(const std::string& name) const {
  return entries_.count(name) != 0;
}

const TensorEntry& TensorFile::get(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end())
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "missing tensor entry: " + name);
  return it->second;
}

Tensor3 TensorFile::get_tensor3(const std::string& name) const {
  const TensorEntry& e = get(name);
  if (e.dims.size() != 3)
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "entry is not rank 3: " + name);
  Tensor3 t(static_cast<int>(e.dims[0]), static_cast<int>(e.dims[1]),
            static_cast<int>(e.dims[2]));
  t.data = e.data;
  return t;
}

ConvKernel TensorFile::get_kernel(const std::string& name) const {
  const TensorEntry& w = get(name + "_weight");
  if (w.dims.size() != 4)
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "kernel weight is not rank 4: " + name);
  const TensorEntry& b = get(name + "_bias");
  if (b.dims.size() != 1 || b.dims[0] != w.dims[0])
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "kernel bias does not match weight: " + name);
  ConvKernel k(static_cast<int>(w.dims[1]), static_cast<int>(w.dims[2]),
               static_cast<int>(w.dims[3]), static_cast<int>(w.dims[0]));
  k.weights = w.data;
  k.bias = b.data;
  return k;
}

TensorFile load_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw TensorFileError(TensorFileError::Code::io,
                          "cannot open tensor file: " + path.string());
  std::string blob((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof())
    throw TensorFileError(TensorFileError::Code::io,
                          "read failed: " + path.string());

  Reader r(reinterpret_cast<const unsigned char*>(blob.data()), blob.size());
  const unsigned char* magic = r.bytes(4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw TensorFileError(TensorFileError::Code::bad_magic,
                          "not a tensor container: " + path.string());
  std::uint8_t version = r.u8("version");
  if (version != kVersion)
    throw TensorFileError(TensorFileError::Code::bad_version,
                          "unsupported container version " +
                              std::to_string(version));
  std::uint16_t count = r.u16("entry count");

  TensorFile file;
  for (std::uint16_t idx = 0; idx < count; ++idx) {
    std::uint16_t name_len = r.u16("name length");
    if (name_len == 0)
      throw TensorFileError(TensorFileError::Code::bad_entry,
                            "empty entry name at index " + std::to_string(idx));
    const unsigned char* name_bytes = r.bytes(name_len, "name");
    std::string name(reinterpret_cast<const char*>(name_bytes), name_len);

    std::uint8_t dtype = r.u8("dtype");
    if (dtype != kDtypeF32)
      throw TensorFileError(TensorFileError::Code::bad_dtype,
                            "unsupported dtype " + std::to_string(dtype) +
                                " in entry " + name);
    std::uint8_t ndim = r.u8("ndim");
    if (ndim == 0)
      throw TensorFileError(TensorFileError::Code::bad_entry,
                            "zero-rank entry: " + name);
    TensorEntry entry;
    entry.dims.reserve(ndim);
    std::size_t elems = 1;
    for (int d = 0; d < ndim; ++d) {
      std::uint32_t dim = r.u32("dim");
      if (dim == 0)
        throw TensorFileError(TensorFileError::Code::bad_entry,
                              "zero-sized dimension in entry: " + name);
      if (elems > std::numeric_limits<std::size_t>::max() / dim)
        throw TensorFileError(TensorFileError::Code::bad_entry,
                              "entry size overflow: " + name);
      entry.dims.push_back(dim);
      elems *= dim;
    }
    const unsigned char* payload = r.bytes(elems * 4, "payload");
    entry.data.resize(elems);
    std::memcpy(entry.data.data(), payload, elems * 4);
    file.add(name, std::move(entry));
  }
  if (r.pos() != r.size())
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "trailing bytes after last entry");
  return file;
}

void save_tensor_file(const std::filesystem::path& path,
                      const TensorFile& file) {
  if (file.size() > std::numeric_limits<std::uint16_t>::max())
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "too many entries for container");
  std::string out;
  out.append(kMagic, 4);
  out.push_back(static_cast<char>(kVersion));
  put_u16(out, static_cast<std::uint16_t>(file.size()));
  for (const std::string& name : file.names()) {
    const TensorEntry& e = file.get(name);
    put_u16(out, static_cast<std::uint16_t>(name.size()));
    out.append(name);
    out.push_back(static_cast<char>(kDtypeF32));
    out.push_back(static_cast<char>(e.dims.size()));
    for (std::uint32_t d : e.dims) put_u32(out, d);
    std::size_t byte_count = e.data.size() * 4;
    std::size_t base = out.size();
    out.resize(base + byte_count);
    std::memcpy(out.data() + base, e.data.data(), byte_count);
  }

  std::filesystem::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  std::filesystem::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os)
      throw TensorFileError(TensorFileError::Code::io,
                            "cannot open for write: " + tmp.string());
    os.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!os)
      throw TensorFileError(TensorFileError::Code::io,
                            "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw TensorFileError(TensorFileError::Code::io,
                          "rename failed: " + path.string() + ": " +
                              ec.message());
  }
}

}  // namespace vistrack
