#include "pnc/mac.hpp"

#include <algorithm>

#include "pnc/atoms.hpp"

namespace pnc {

namespace {

struct CrcTable {
  std::array<std::uint32_t, 256> t{};
  CrcTable() {
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
  }
};

const CrcTable kCrc;

void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void append_fcs(std::vector<std::uint8_t>& out) {
  const std::uint32_t c = crc32({out.data(), out.size()});
  out.push_back(static_cast<std::uint8_t>(c >> 24));
  out.push_back(static_cast<std::uint8_t>(c >> 16));
  out.push_back(static_cast<std::uint8_t>(c >> 8));
  out.push_back(static_cast<std::uint8_t>(c));
}

template <typename Frame>
void append_header(std::vector<std::uint8_t>& out, const Frame& f) {
  out.insert(out.end(), f.fc.begin(), f.fc.end());
  out.insert(out.end(), f.bssid.begin(), f.bssid.end());
}

void check_fcs(std::span<const std::uint8_t> frame) {
  const std::size_t body = frame.size() - 4;
  const std::uint32_t want = crc32(frame.subspan(0, body));
  const std::uint32_t got = static_cast<std::uint32_t>(frame[body]) << 24 |
                            static_cast<std::uint32_t>(frame[body + 1]) << 16 |
                            static_cast<std::uint32_t>(frame[body + 2]) << 8 |
                            static_cast<std::uint32_t>(frame[body + 3]);
  if (want != got)
    throw DecodeError(DecodeErrorKind::fcs_failure, "frame check sequence mismatch");
}

template <typename Frame>
std::size_t read_header(Frame& f, std::span<const std::uint8_t> frame) {
  std::copy_n(frame.begin(), 2, f.fc.begin());
  std::copy_n(frame.begin() + 2, 6, f.bssid.begin());
  return 8;
}

std::uint8_t role_byte(const AtomRole& r) {
  if (r.class_id == 0) {
    if (r.role_index != 0)
      throw std::invalid_argument("role index without an atom class");
    return 0;
  }
  if (r.class_id < 1 || r.class_id > 9)
    throw std::invalid_argument("atom class out of range");
  if (r.role_index < 0 || r.role_index >= atom(r.class_id).peripheral_count())
    throw std::invalid_argument("role index out of range for the class");
  return static_cast<std::uint8_t>(r.class_id << 4 | r.role_index);
}

AtomRole parse_role(std::uint8_t b) {
  const int cls = b >> 4;
  const int idx = b & 0xF;
  if (cls > 9 || (cls == 0 && idx != 0) ||
      (cls >= 1 && idx >= atom(cls).peripheral_count()))
    throw DecodeError(DecodeErrorKind::nibble_out_of_range,
                      "role byte nibble out of range");
  return {cls, idx};
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data) {
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::uint8_t b : data) c = (c >> 8) ^ kCrc.t[(c ^ b) & 0xFF];
  return c ^ 0xFFFFFFFFu;
}

int request_length(int n_r) { return 13 + (n_r + 7) / 8; }
int demand_length(int w) { return 12 + 2 * w; }
int assignment_length(int n_r, int w) { return 12 + (2 + 2 * w) * n_r; }

int handshake_overhead(int n_r, int w) {
  return request_length(n_r) + n_r * demand_length(w) +
         assignment_length(n_r, w);
}

double per_packet_overhead(int n_r, int w) {
  return static_cast<double>(handshake_overhead(n_r, w)) / (n_r * w);
}

std::vector<std::uint8_t> encode(const RequestFrame& f) {
  if (f.n_r < 1) throw std::invalid_argument("request needs n_r >= 1");
  if (static_cast<int>(f.scheduled.size()) != f.n_r)
    throw std::invalid_argument("scheduled bitmap length differs from n_r");
  if (f.w < 1 || f.w > 255)
    throw std::invalid_argument("demand window must be 1..255");
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(request_length(f.n_r)));
  append_header(out, f);
  const int nbytes = (f.n_r + 7) / 8;
  for (int b = 0; b < nbytes; ++b) {
    std::uint8_t byte = 0;
    for (int bit = 0; bit < 8; ++bit) {
      const int k = b * 8 + bit;
      if (k < f.n_r && f.scheduled[static_cast<std::size_t>(k)])
        byte |= static_cast<std::uint8_t>(1u << bit);
    }
    out.push_back(byte);
  }
  out.push_back(static_cast<std::uint8_t>(f.w));
  append_fcs(out);
  return out;
}

std::vector<std::uint8_t> encode(const DemandFrame& f) {
  if (f.dids.empty() || f.dids.size() > 255)
    throw std::invalid_argument("demand needs 1..255 slots");
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(demand_length(static_cast<int>(f.dids.size()))));
  append_header(out, f);
  for (std::uint16_t d : f.dids) append_u16(out, d);
  append_fcs(out);
  return out;
}

std::vector<std::uint8_t> encode(const AssignmentFrame& f) {
  if (f.entries.empty())
    throw std::invalid_argument("assignment needs at least one entry");
  const std::size_t w = f.entries.front().slots.size();
  if (w < 1 || w > 255)
    throw std::invalid_argument("assignment needs 1..255 slots per entry");
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(
      assignment_length(static_cast<int>(f.entries.size()), static_cast<int>(w))));
  append_header(out, f);
  for (const auto& e : f.entries) {
    if (e.slots.size() != w)
      throw std::invalid_argument("assignment entries must share one W");
    append_u16(out, e.sid);
    for (const auto& s : e.slots) {
      if (s.start < 0 || s.start > 255)
        throw std::length_error(
            "start time exceeds the one-byte field; roster longer than 255 slots");
      out.push_back(static_cast<std::uint8_t>(s.start));
      out.push_back(role_byte(s.role));
    }
  }
  append_fcs(out);
  return out;
}

RequestFrame decode_request(std::span<const std::uint8_t> frame) {
  if (frame.size() < 14)
    throw DecodeError(DecodeErrorKind::length_mismatch, "request frame too short");
  check_fcs(frame);
  RequestFrame f;
  std::size_t pos = read_header(f, frame);
  const std::size_t nbytes = frame.size() - 13;
  f.n_r = static_cast<int>(nbytes) * 8;
  f.scheduled.resize(static_cast<std::size_t>(f.n_r));
  for (std::size_t b = 0; b < nbytes; ++b)
    for (int bit = 0; bit < 8; ++bit)
      f.scheduled[b * 8 + static_cast<std::size_t>(bit)] =
          (frame[pos + b] >> bit) & 1;
  f.w = frame[pos + nbytes];
  return f;
}

DemandFrame decode_demand(std::span<const std::uint8_t> frame) {
  if (frame.size() < 14 || (frame.size() - 12) % 2 != 0)
    throw DecodeError(DecodeErrorKind::length_mismatch,
                      "demand frame length not 12 + 2W");
  check_fcs(frame);
  DemandFrame f;
  std::size_t pos = read_header(f, frame);
  const std::size_t w = (frame.size() - 12) / 2;
  f.dids.reserve(w);
  for (std::size_t i = 0; i < w; ++i) {
    f.dids.push_back(static_cast<std::uint16_t>(
        static_cast<std::uint16_t>(frame[pos]) << 8 | frame[pos + 1]));
    pos += 2;
  }
  return f;
}

AssignmentFrame decode_assignment(std::span<const std::uint8_t> frame, int w) {
  if (w < 1 || w > 255) throw std::invalid_argument("w must be 1..255");
  const std::size_t stride = 2 + 2 * static_cast<std::size_t>(w);
  if (frame.size() < 12 + stride || (frame.size() - 12) % stride != 0)
    throw DecodeError(DecodeErrorKind::length_mismatch,
                      "assignment frame length not 12 + (2 + 2W) * n_r");
  check_fcs(frame);
  AssignmentFrame f;
  std::size_t pos = read_header(f, frame);
  const std::size_t n_r = (frame.size() - 12) / stride;
  f.entries.resize(n_r);
  for (auto& e : f.entries) {
    e.sid = static_cast<std::uint16_t>(
        static_cast<std::uint16_t>(frame[pos]) << 8 | frame[pos + 1]);
    pos += 2;
    e.slots.resize(static_cast<std::size_t>(w));
    for (auto& s : e.slots) {
      s.start = frame[pos];
      s.role = parse_role(frame[pos + 1]);
      pos += 2;
    }
  }
  return f;
}

}  // namespace pnc
