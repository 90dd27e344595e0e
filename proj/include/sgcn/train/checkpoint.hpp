#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>

#include "sgcn/data/vocab.hpp"
#include "sgcn/model/config.hpp"
#include "sgcn/model/params.hpp"

namespace sgcn::train {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainingState {
  std::size_t epoch = 0;
  double best_dev_f1 = 0.0;
  double lr = 0.0;
};

template <typename T>
struct Checkpoint {
  ModelConfig config;
  ModelParams<T> params;
  data::Vocabulary vocab;
  TrainingState state;
};

struct LoadOptions {
  // Permits loading 64-bit values into a 32-bit model.
  bool allow_narrowing = false;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary layout, all integers little-endian:
///   "SGCNCKPT" | u32 version | u32 value width (4 or 8)
///   | str config | 4 x lexicon (u64 count, str...) | u64 epoch, f64 best F1, f64 lr
///   | u64 tensor count | per tensor: str name, u64 rank, u64 dims..., raw values
///   | u32 CRC-32 of everything before it
/// where str is a u64 byte length followed by the bytes.
template <typename T>
void save_checkpoint(const Checkpoint<T>& checkpoint, const std::filesystem::path& path);

/// Verifies magic, version, checksum and tensor names/shapes against the
/// stored config. 32-bit values widen freely; 64-bit values load into a
/// 32-bit model only with allow_narrowing.
template <typename T>
Checkpoint<T> load_checkpoint(const std::filesystem::path& path, const LoadOptions& options = {});

// Value width recorded in a checkpoint file (4 or 8), without loading it.
std::size_t checkpoint_value_width(const std::filesystem::path& path);

}  // namespace sgcn::train
