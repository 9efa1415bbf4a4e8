#pragma once

#include <stdexcept>

namespace hst {

// Input that does not parse: bad BP text, bad array text, bad blob.
struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bit stream that ends early or carries an impossible value.
struct MalformedStream : MalformedInput {
    using MalformedInput::MalformedInput;
};

}  // namespace hst
