/* Copyright 2026 The omegaturn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Pure C translation unit: proves the public header is valid C and the
 * shared library links from C. */

#include <stdio.h>
#include <string.h>

#include "omegaturn/omegaturn.h"

int main(void) {
  if (strcmp(ot_version(), "0.1.0") != 0) {
    fprintf(stderr, "unexpected version\n");
    return 1;
  }

  ot_config* cfg = NULL;
  if (ot_config_parse("{}", &cfg) != OT_OK) {
    fprintf(stderr, "config parse failed: %s\n", ot_last_error());
    return 1;
  }

  char* hash = NULL;
  if (ot_config_hash(cfg, &hash) != OT_OK || strlen(hash) != 16) {
    fprintf(stderr, "hash failed\n");
    return 1;
  }
  ot_string_free(hash);
  ot_config_free(cfg);

  ot_config* bad = NULL;
  if (ot_config_parse("{\"nope\": 1}", &bad) != OT_ERROR_CONFIG) {
    fprintf(stderr, "expected config error\n");
    return 1;
  }
  if (strlen(ot_last_error()) == 0) {
    fprintf(stderr, "expected an error message\n");
    return 1;
  }

  printf("capi smoke ok\n");
  return 0;
}
