#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace awb {

// Interned variable name. Ids are handed out in first-use order, which is
// the "declared order" the monomial ordering is based on.
class Symbol {
public:
    Symbol() = default;
    static Symbol intern(std::string_view name);
    // Looks up without interning; returns false when the name is unknown.
    static bool find(std::string_view name, Symbol& out);
    static Symbol from_id(std::uint32_t id) { return Symbol(id); }

    std::uint32_t id() const { return id_; }
    const std::string& name() const;

    friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
    friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }
    friend bool operator<(Symbol a, Symbol b) { return a.id_ < b.id_; }

private:
    explicit Symbol(std::uint32_t id) : id_(id) {}
    std::uint32_t id_ = 0;
};

}  // namespace awb

template <>
struct std::hash<awb::Symbol> {
    std::size_t operator()(awb::Symbol s) const noexcept { return s.id(); }
};
