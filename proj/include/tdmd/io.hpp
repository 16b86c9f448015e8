// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tdmd/dmd.hpp"
#include "tdmd/sequence.hpp"
#include "tdmd/tucker.hpp"

#include <iosfwd>
#include <string>

namespace tdmd {

// Binary formats. Each starts with one ASCII header line terminated by '\n',
// followed by little-endian IEEE-754 (real, imag) double pairs.
//
//   CT1 <N_rx> <N_tx> <N_sc>                       tensor entries in vec order
//   CTS1 <T> <N_rx> <N_tx> <N_sc> <Tp_ms>           T tensor payloads
//   TKM1 <N_rx> <R_rx> <N_tx> <R_tx> <N_sc> <R_sc>  factors, each column-major
//   DMD1 <N> <r>                                    Phi (column-major), Lambda, b

void write_tensor(std::ostream& out, const ChannelTensor& t);
[[nodiscard]] ChannelTensor read_tensor(std::istream& in);

void write_sequence(std::ostream& out, const ChannelSequence& seq);
[[nodiscard]] ChannelSequence read_sequence(std::istream& in);

void write_tucker(std::ostream& out, const TuckerModel& model);
[[nodiscard]] TuckerModel read_tucker(std::istream& in);

/// The reduced operator is not stored; a loaded model carries diag(Lambda),
/// the operator expressed in its own eigenbasis.
void write_dmd(std::ostream& out, const DmdModel& model);
[[nodiscard]] DmdModel read_dmd(std::istream& in);

// Path-based wrappers. Loading rejects trailing bytes after the payload.
void save_tensor(const std::string& path, const ChannelTensor& t);
[[nodiscard]] ChannelTensor load_tensor(const std::string& path);
void save_sequence(const std::string& path, const ChannelSequence& seq);
[[nodiscard]] ChannelSequence load_sequence(const std::string& path);
void save_tucker(const std::string& path, const TuckerModel& model);
[[nodiscard]] TuckerModel load_tucker(const std::string& path);
void save_dmd(const std::string& path, const DmdModel& model);
[[nodiscard]] DmdModel load_dmd(const std::string& path);

/// Magic word of the file at `path` ("CT1", "CTS1", "TKM1", "DMD1"), or
/// FormatError if it is none of them.
[[nodiscard]] std::string detect_format(const std::string& path);

}  // namespace tdmd
