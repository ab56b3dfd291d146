#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "crl/replay.hpp"
#include "crl/rng.hpp"

namespace {

using namespace crl;

Transition tagged(double tag) {
    Transition t;
    t.reward = tag;
    return t;
}

TEST(ReplayBuffer, OldestOverwriteOrder) {
    ReplayBuffer buf(10);
    for (int i = 0; i < 13; ++i) buf.push(tagged(i));
    EXPECT_EQ(buf.size(), 10u);
    std::set<double> tags;
    for (std::size_t i = 0; i < buf.size(); ++i) tags.insert(buf[i].reward);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(tags.count(i), 0u);  // 3 oldest gone
    for (int i = 3; i < 13; ++i) EXPECT_EQ(tags.count(i), 1u);
}

TEST(ReplayBuffer, SampleIsWithoutReplacement) {
    ReplayBuffer buf(64);
    for (int i = 0; i < 40; ++i) buf.push(tagged(i));
    Rng rng = derive_stream(31, "test/replay");
    for (int trial = 0; trial < 50; ++trial) {
        const auto batch = buf.sample(16, rng);
        std::set<const Transition*> unique(batch.begin(), batch.end());
        EXPECT_EQ(unique.size(), batch.size());
    }
    EXPECT_THROW(buf.sample(41, rng), std::invalid_argument);
}

TEST(ReplayBuffer, RejectsInvalidTransitions) {
    ReplayBuffer buf(4);
    Transition t;
    t.action = 1.5;  // outside [-1, 1]
    EXPECT_THROW(buf.push(t), std::invalid_argument);
    t.action = 0.0;
    t.reward = std::nan("");
    EXPECT_THROW(buf.push(t), std::invalid_argument);
    EXPECT_THROW(ReplayBuffer(0), std::invalid_argument);
}

}  // namespace
