#include "sgspec/json_io.hpp"
