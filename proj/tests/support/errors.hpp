#pragma once

#include <gtest/gtest.h>

#include "tfs/error.hpp"

namespace tfs::test {

// Code of the tfs::Error thrown by f; records a failure if nothing is thrown.
template <typename F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no tfs::Error thrown";
  return Errc::io;
}

}  // namespace tfs::test
