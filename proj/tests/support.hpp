// One operator table for the whole test binary, loaded from and saved back to the build cache.
#pragma once

#include "picard/catalog.hpp"
#include "picard/theta.hpp"

#include <map>
#include <memory>

namespace picard::test {

inline OperatorTable& table() {
    struct Holder {
        OperatorTable t;
        Holder() { t.load(PICARD_TEST_CACHE); }
        ~Holder() {
            try {
                if (t.dirty()) t.save(PICARD_TEST_CACHE);
            } catch (...) {
            }
        }
    };
    static Holder h;
    return h.t;
}

// catalogs are memoized per truncation
inline Catalog& catalog(int w = 16) {
    static std::map<int, std::unique_ptr<Catalog>> cats;
    auto& c = cats[w];
    if (!c) c = std::make_unique<Catalog>(table(), w);
    return *c;
}

}  // namespace picard::test
