#pragma once

#include <cstdint>
#include <filesystem>

#include "aegan/training.hpp"

namespace aegan {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Writes the full training state to a single file. Layout (little endian):
///
///   "AEGANCKP"                 8-byte magic
///   u32 version
///   u64 config hash            config_hash(state.config)
///   u64 step
///   str config text            canonical to_config_text()
///   str rng state              std::mt19937_64 textual state
///   u32 network count
///   per network:
///     u8  role                 NetworkRole ordinal
///     params                   parameter block
///     u64 optimizer steps
///     u32 slot count, then one parameter block per slot
///
/// str = u32 byte length + bytes. A parameter block is u64 seed, u32 tensor
/// count, then per tensor: str name, u32 rank, u64 dims[rank], f64 values.
///
/// Only networks active in the run's mode are stored; inactive ones are
/// rebuilt from the seed on load.
void save_checkpoint(const TrainingState& state, const std::filesystem::path& path);

/// Reads a checkpoint written by save_checkpoint. Throws DataError on a
/// malformed file or a config hash that does not match the embedded config.
TrainingState load_checkpoint(const std::filesystem::path& path);

}  // namespace aegan
