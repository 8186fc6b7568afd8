#include <stdio.h>
#include "discrete_bm.h"

int main(int argc, char **argv) {
    if (argc < 3) {
        fprintf(stderr, "usage: %s K.json L.json\n", argv[0]);
        return 2;
    }
    const char *json[2];
    char buf[2][1 << 16];
    for (int i = 0; i < 2; i++) {
        FILE *f = fopen(argv[i + 1], "r");
        if (!f) return 2;
        size_t n = fread(buf[i], 1, sizeof buf[i] - 1, f);
        buf[i][n] = 0;
        fclose(f);
        json[i] = buf[i];
    }
    DbmSet *k = NULL, *l = NULL;
    DbmCertificate *cert = NULL;
    if (dbm_set_from_json(json[0], &k) != DBM_STATUS_OK ||
        dbm_set_from_json(json[1], &l) != DBM_STATUS_OK ||
        dbm_verify("main_bm", k, l, "1/2", NULL, &cert) != DBM_STATUS_OK) {
        fprintf(stderr, "error: %s\n", dbm_last_error());
        return 2;
    }
    char *out = NULL;
    dbm_certificate_to_json(cert, &out);
    printf("%s\n", out);
    int verdict = dbm_certificate_verdict(cert);
    dbm_string_free(out);
    dbm_certificate_free(cert);
    dbm_set_free(k);
    dbm_set_free(l);
    return verdict == DBM_VERDICT_VIOLATED;
}
