#include "sgspec/config.hpp"
