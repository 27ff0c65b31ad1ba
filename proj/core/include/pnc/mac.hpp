#pragma once

// Wire codec for the three control frames of a scheduling round: the relay's
// transmission request, per-peripheral demand reports, and the final slot
// assignment. All multi-byte integers are big-endian. Every frame ends in a
// CRC-32 (reflected 0xEDB88320, init and final xor 0xFFFFFFFF) over all
// preceding bytes, appended big-endian. Frame Control and BSSID are opaque
// bytes carried verbatim.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnc {

/// | FC 2 | BSSID 6 | bitmap ceil(n_r/8) | W 1 | FCS 4 |
/// Bitmap bit k (LSB of the first byte = bit 0) marks peripheral k as
/// scheduled; bits past n_r stay zero.
struct RequestFrame {
  std::array<std::uint8_t, 2> fc{};
  std::array<std::uint8_t, 6> bssid{};
  int n_r = 0;
  std::vector<bool> scheduled;  // size n_r
  int w = 1;                    // demand slots granted per peripheral, >= 1

  friend bool operator==(const RequestFrame&, const RequestFrame&) = default;
};

/// | FC 2 | BSSID 6 | W x DID 2 | FCS 4 |  DID 0 marks an unused slot.
struct DemandFrame {
  std::array<std::uint8_t, 2> fc{};
  std::array<std::uint8_t, 6> bssid{};
  std::vector<std::uint16_t> dids;  // size W >= 1

  friend bool operator==(const DemandFrame&, const DemandFrame&) = default;
};

/// One packed role byte: high nibble the atom class (1..9, 0 = no
/// assignment), low nibble the peripheral index within the class template.
struct AtomRole {
  int class_id = 0;
  int role_index = 0;

  friend bool operator==(const AtomRole&, const AtomRole&) = default;
};

struct AssignmentSlot {
  int start = 0;  // 1-based first slot of the execution; 0 when unassigned
  AtomRole role;

  friend bool operator==(const AssignmentSlot&, const AssignmentSlot&) = default;
};

/// | FC 2 | BSSID 6 | n_r x ( SID 2 | W x ( start 1 | role 1 ) ) | FCS 4 |
/// The on-air length is ambiguous in (W, n_r), so decoding needs W.
struct AssignmentFrame {
  std::array<std::uint8_t, 2> fc{};
  std::array<std::uint8_t, 6> bssid{};
  struct Entry {
    std::uint16_t sid = 0;
    std::vector<AssignmentSlot> slots;  // size W, uniform across entries

    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;  // size n_r

  friend bool operator==(const AssignmentFrame&, const AssignmentFrame&) = default;
};

enum class DecodeErrorKind { length_mismatch, fcs_failure, nibble_out_of_range };

class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  DecodeErrorKind kind() const { return kind_; }

 private:
  DecodeErrorKind kind_;
};

std::uint32_t crc32(std::span<const std::uint8_t> data);

/// Encoders validate field ranges (std::invalid_argument), except that a
/// start time past 255 throws std::length_error: the one-byte start field
/// cannot address rosters longer than 255 slots.
std::vector<std::uint8_t> encode(const RequestFrame& f);
std::vector<std::uint8_t> encode(const DemandFrame& f);
std::vector<std::uint8_t> encode(const AssignmentFrame& f);

/// Decoders throw DecodeError; checks run in the order length, FCS, role
/// nibbles. The request bitmap length is recovered from the frame length,
/// so the decoded n_r is rounded up to the next multiple of 8.
RequestFrame decode_request(std::span<const std::uint8_t> frame);
DemandFrame decode_demand(std::span<const std::uint8_t> frame);
AssignmentFrame decode_assignment(std::span<const std::uint8_t> frame, int w);

int request_length(int n_r);
int demand_length(int w);
int assignment_length(int n_r, int w);

/// Total handshake bytes for one round: one request, n_r demand reports,
/// one assignment.
int handshake_overhead(int n_r, int w);

/// Handshake bytes per schedulable packet, handshake_overhead / (n_r * w).
double per_packet_overhead(int n_r, int w);

}  // namespace pnc
