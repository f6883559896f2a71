#include "fbc/cascade.hpp"

#include "fbc/error.hpp"
#include "fbc/rng.hpp"
#include "fbc/wire.hpp"

#include "doctest.h"

using namespace fbc;

TEST_CASE("cascade round trip is lossless") {
    SUBCASE("empty input") {
        const auto archive = cascade_compress(nullptr, 0);
        CHECK(archive.size() >= kCascadeHeaderBytes);
        CHECK(cascade_decompress(archive).empty());
    }
    SUBCASE("random packet bytes") {
        Rng rng(1);
        std::vector<Packet> packets;
        for (int i = 0; i < 100000; ++i) {
            if (rng.bounded(2)) {
                packets.emplace_back(Event{static_cast<uint16_t>(rng.bounded(320)),
                                           static_cast<uint16_t>(rng.bounded(240)),
                                           static_cast<uint32_t>(rng.bounded(1u << 30)),
                                           Polarity::On});
            } else {
                FlowEvent fe;
                fe.event.t = static_cast<uint32_t>(rng.bounded(1u << 30));
                fe.vx = static_cast<double>(static_cast<int64_t>(rng.bounded(4096)) - 2048);
                fe.vy = 0;
                packets.emplace_back(fe);
            }
        }
        const std::vector<uint8_t> bytes = encode_packets(packets);
        const auto archive = cascade_compress(bytes);
        CHECK(cascade_decompress(archive) == bytes);
    }
}

TEST_CASE("archives self-describe and reject corruption") {
    const std::vector<uint8_t> payload{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    auto archive = cascade_compress(payload);
    REQUIRE(archive.size() > kCascadeHeaderBytes);
    CHECK(is_cascade_archive(archive.data(), archive.size()));

    SUBCASE("truncated") {
        auto cut = archive;
        cut.resize(cut.size() - 3);
        CHECK_THROWS_AS(cascade_decompress(cut), Error);
        auto tiny = archive;
        tiny.resize(5);
        CHECK_THROWS_AS(cascade_decompress(tiny), Error);
    }
    SUBCASE("wrong magic") {
        auto bad = archive;
        bad[0] = 'X';
        CHECK_THROWS_AS(cascade_decompress(bad), Error);
        CHECK(!is_cascade_archive(bad.data(), bad.size()));
    }
    SUBCASE("unknown backend") {
        auto bad = archive;
        bad[4] = 42;
        CHECK_THROWS_AS(cascade_decompress(bad), Error);
    }
    SUBCASE("flipped payload byte") {
        auto bad = archive;
        bad[archive.size() - 1] ^= 0xff;
        CHECK_THROWS_AS(cascade_decompress(bad), Error);
    }
}

TEST_CASE("cascaded_cr") {
    CHECK(cascaded_cr(1000, 8000) == doctest::Approx(1.0));
    CHECK(cascaded_cr(1000, 800) == doctest::Approx(10.0));
    CHECK_THROWS_AS(cascaded_cr(1000, 0), Error);
}

TEST_CASE("repetitive packet streams compress far below their wire size") {
    // Constant-velocity flow traffic is exactly the redundancy the cascade
    // stage is meant to exploit.
    std::vector<Packet> packets;
    for (int i = 0; i < 20000; ++i) {
        FlowEvent fe;
        fe.event = Event{100, 100, static_cast<uint32_t>(i * 50), Polarity::On};
        fe.vx = 150;
        fe.vy = 0;
        packets.emplace_back(fe);
    }
    const std::vector<uint8_t> bytes = encode_packets(packets);
    const auto archive = cascade_compress(bytes);
    CHECK(archive.size() * 4 < bytes.size());
    CHECK(cascade_decompress(archive) == bytes);
}
