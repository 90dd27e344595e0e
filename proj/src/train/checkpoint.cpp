#include "sgcn/train/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <zlib.h>

namespace sgcn::train {

namespace {

constexpr char kMagic[8] = {'S', 'G', 'C', 'N', 'C', 'K', 'P', 'T'};

template <typename U>
void put_le(std::string& out, U value) {
  unsigned char bytes[sizeof(U)];
  std::memcpy(bytes, &value, sizeof(U));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(U));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(U));
}

void put_str(std::string& out, const std::string& s) {
  put_le<std::uint64_t>(out, s.size());
  out += s;
}

std::uint32_t crc(const char* data, std::size_t size) {
  uLong c = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  while (size > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    c = crc32(c, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    size -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

class Reader {
 public:
  Reader(const std::string& buf, std::size_t end) : buf_(buf), end_(end) {}

  template <typename U>
  U get() {
    need(sizeof(U));
    unsigned char bytes[sizeof(U)];
    std::memcpy(bytes, buf_.data() + pos_, sizeof(U));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(U));
    pos_ += sizeof(U);
    U v;
    std::memcpy(&v, bytes, sizeof(U));
    return v;
  }

  std::string str() {
    const auto n = get<std::uint64_t>();
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return end_ - pos_; }

 private:
  void need(std::uint64_t n) {
    if (n > end_ - pos_) throw CheckpointError("checkpoint: truncated payload");
  }
  const std::string& buf_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Checks magic, version and checksum; returns the payload end (checksum offset).
std::size_t verify_envelope(const std::string& buf, const std::filesystem::path& path) {
  constexpr std::size_t header = sizeof(kMagic) + 8;
  if (buf.size() < header + 4) throw CheckpointError(path.string() + ": file too short to be a checkpoint");
  if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) throw CheckpointError(path.string() + ": bad magic");
  const std::size_t end = buf.size() - 4;
  unsigned char bytes[4];
  std::memcpy(bytes, buf.data() + end, 4);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + 4);
  std::uint32_t stored;
  std::memcpy(&stored, bytes, 4);
  Reader head(buf, end);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) head.get<char>();
  const auto version = head.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw CheckpointError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  }
  if (stored != crc(buf.data(), end)) throw CheckpointError(path.string() + ": checksum mismatch");
  return end;
}

void put_lexicon(std::string& out, const data::Lexicon& lex) {
  put_le<std::uint64_t>(out, lex.size());
  for (const auto& t : lex.tokens()) put_str(out, t);
}

data::Lexicon get_lexicon(Reader& in) {
  const auto n = in.get<std::uint64_t>();
  if (n > in.remaining()) throw CheckpointError("checkpoint: implausible lexicon size");
  std::vector<std::string> tokens;
  tokens.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) tokens.push_back(in.str());
  try {
    return data::Lexicon(std::move(tokens));
  } catch (const data::DatasetError& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  }
}

}  // namespace

template <typename T>
void save_checkpoint(const Checkpoint<T>& ckpt, const std::filesystem::path& path) {
  std::string out(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, sizeof(T));
  put_str(out, format_model_config(ckpt.config));
  put_lexicon(out, ckpt.vocab.words);
  put_lexicon(out, ckpt.vocab.pos);
  put_lexicon(out, ckpt.vocab.ner);
  put_lexicon(out, ckpt.vocab.relations);
  put_le<std::uint64_t>(out, ckpt.state.epoch);
  put_le<double>(out, ckpt.state.best_dev_f1);
  put_le<double>(out, ckpt.state.lr);

  std::uint64_t count = 0;
  ckpt.params.visit([&](const std::string&, const Tensor<T>&) { ++count; });
  put_le<std::uint64_t>(out, count);
  ckpt.params.visit([&](const std::string& name, const Tensor<T>& t) {
    put_str(out, name);
    put_le<std::uint64_t>(out, t.rank());
    for (std::size_t d : t.shape()) put_le<std::uint64_t>(out, d);
    for (T v : t.values()) put_le<T>(out, v);
  });
  put_le<std::uint32_t>(out, crc(out.data(), out.size()));

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CheckpointError("cannot write checkpoint " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw CheckpointError("failed writing checkpoint " + path.string());
}

std::size_t checkpoint_value_width(const std::filesystem::path& path) {
  const std::string buf = read_file(path);
  const std::size_t end = verify_envelope(buf, path);
  Reader in(buf, end);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) in.get<char>();
  in.get<std::uint32_t>();
  return in.get<std::uint32_t>();
}

template <typename T>
Checkpoint<T> load_checkpoint(const std::filesystem::path& path, const LoadOptions& options) {
  const std::string buf = read_file(path);
  const std::size_t end = verify_envelope(buf, path);
  Reader in(buf, end);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) in.get<char>();
  in.get<std::uint32_t>();
  const auto width = in.get<std::uint32_t>();
  if (width != 4 && width != 8) throw CheckpointError(path.string() + ": bad value width");
  if (width > sizeof(T) && !options.allow_narrowing) {
    throw CheckpointError(path.string() +
                          ": checkpoint holds 64-bit values; loading into a 32-bit model needs explicit narrowing");
  }

  Checkpoint<T> ckpt;
  try {
    ckpt.config = parse_model_config(in.str());
    ckpt.config.validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
  ckpt.config.precision = sizeof(T) == 8 ? Precision::k64 : Precision::k32;
  ckpt.vocab.words = get_lexicon(in);
  ckpt.vocab.pos = get_lexicon(in);
  ckpt.vocab.ner = get_lexicon(in);
  ckpt.vocab.relations = get_lexicon(in);
  ckpt.state.epoch = in.get<std::uint64_t>();
  ckpt.state.best_dev_f1 = in.get<double>();
  ckpt.state.lr = in.get<double>();

  std::map<std::string, Tensor<T>> stored;
  const auto count = in.get<std::uint64_t>();
  for (std::uint64_t k = 0; k < count; ++k) {
    std::string name = in.str();
    const auto rank = in.get<std::uint64_t>();
    if (rank > 2) throw CheckpointError(path.string() + ": tensor " + name + " has rank " + std::to_string(rank));
    ad::Shape shape;
    for (std::uint64_t r = 0; r < rank; ++r) shape.push_back(in.get<std::uint64_t>());
    const std::size_t n = ad::shape_size(shape);
    if (n > in.remaining() / width) throw CheckpointError(path.string() + ": truncated tensor " + name);
    std::vector<T> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = width == 8 ? static_cast<T>(in.get<double>()) : static_cast<T>(in.get<float>());
    }
    stored.emplace(std::move(name), Tensor<T>(std::move(shape), std::move(values)));
  }
  if (in.remaining() != 0) throw CheckpointError(path.string() + ": trailing bytes after tensors");

  Rng scratch(0);
  ckpt.params = ModelParams<T>::init(ckpt.config, scratch);
  std::size_t matched = 0;
  ckpt.params.visit([&](const std::string& name, Tensor<T>& t) {
    auto it = stored.find(name);
    if (it == stored.end()) throw CheckpointError(path.string() + ": missing tensor " + name);
    if (it->second.shape() != t.shape()) {
      throw CheckpointError(path.string() + ": tensor " + name + " has shape " +
                            ad::shape_string(it->second.shape()) + ", config expects " + ad::shape_string(t.shape()));
    }
    std::copy(it->second.values().begin(), it->second.values().end(), t.values().begin());
    ++matched;
  });
  if (matched != stored.size()) throw CheckpointError(path.string() + ": unexpected extra tensors");
  return ckpt;
}

template void save_checkpoint(const Checkpoint<float>&, const std::filesystem::path&);
template void save_checkpoint(const Checkpoint<double>&, const std::filesystem::path&);
template Checkpoint<float> load_checkpoint(const std::filesystem::path&, const LoadOptions&);
template Checkpoint<double> load_checkpoint(const std::filesystem::path&, const LoadOptions&);

}  // namespace sgcn::train
