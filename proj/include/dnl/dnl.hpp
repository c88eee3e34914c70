#pragma once

#include "dnl/common.hpp"
#include "dnl/compare.hpp"
#include "dnl/csv.hpp"
#include "dnl/fingerprint.hpp"
#include "dnl/label.hpp"
#include "dnl/label_io.hpp"
#include "dnl/profile.hpp"
#include "dnl/render.hpp"
#include "dnl/resolve.hpp"
#include "dnl/service.hpp"
#include "dnl/store.hpp"
#include "dnl/validate.hpp"
