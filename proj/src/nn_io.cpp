// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sreldiag Authors

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "sreldiag/nn.hpp"

namespace sreldiag {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'R', 'D', 'N'};
constexpr std::uint32_t kVersion = 1;
// Guards against absurd allocations when reading corrupt files.
constexpr std::uint64_t kMaxCount = 1ULL << 32;

template <typename U>
void put_le(std::ostream& out, U v) {
    char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    out.write(buf, sizeof(U));
}

template <typename U>
U get_le(std::istream& in) {
    unsigned char buf[sizeof(U)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(U))) throw ModelFormatError("network file truncated");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
    return v;
}

void put_sizes(std::ostream& out, const std::vector<std::size_t>& v) {
    put_le<std::uint64_t>(out, v.size());
    for (auto s : v) put_le<std::uint64_t>(out, s);
}

std::vector<std::size_t> get_sizes(std::istream& in) {
    const auto n = get_le<std::uint64_t>(in);
    if (n > kMaxCount) throw ModelFormatError("layer list too long");
    std::vector<std::size_t> v(n);
    for (auto& s : v) s = get_le<std::uint64_t>(in);
    return v;
}

}  // namespace

void save_network(const Network& net, std::ostream& out) {
    const auto& s = net.spec();
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.backbone));
    put_le<std::uint32_t>(out, s.pool ? 1u : 0u);
    put_le<std::uint64_t>(out, s.input_dim);
    put_le<std::uint64_t>(out, s.output_dim);
    put_le<std::uint64_t>(out, s.kernel);
    put_sizes(out, s.hidden);
    put_sizes(out, s.channels);
    put_le<std::uint64_t>(out, net.param_count());
    for (double p : net.params()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(p));
}

Network load_network(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ModelFormatError("not a network file");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kVersion) throw ModelFormatError("unsupported network file version " + std::to_string(version));
    NetworkSpec s;
    const auto backbone = get_le<std::uint32_t>(in);
    if (backbone > 2) throw ModelFormatError("unknown backbone id " + std::to_string(backbone));
    s.backbone = static_cast<Backbone>(backbone);
    s.pool = (get_le<std::uint32_t>(in) & 1u) != 0;
    s.input_dim = get_le<std::uint64_t>(in);
    s.output_dim = get_le<std::uint64_t>(in);
    s.kernel = get_le<std::uint64_t>(in);
    s.hidden = get_sizes(in);
    s.channels = get_sizes(in);
    Network net = [&] {
        try {
            return Network(s);
        } catch (const InvalidArgument& e) {
            throw ModelFormatError(std::string("invalid network spec: ") + e.what());
        }
    }();
    const auto n = get_le<std::uint64_t>(in);
    if (n != net.param_count()) throw ModelFormatError("parameter count does not match the spec");
    for (auto& p : net.params()) p = std::bit_cast<double>(get_le<std::uint64_t>(in));
    return net;
}

void save_network(const Network& net, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    save_network(net, f);
    if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open network file '" + path.string() + "'");
    return load_network(f);
}

}  // namespace sreldiag
