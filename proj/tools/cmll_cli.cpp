// Command-line front end; links only the public C interface.

#include <cmll/cmll.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static const char* USAGE =
    "usage: cmll <subcommand> [args]\n"
    "subcommands: field ideal rayclass witt lambda lt cm tannaka selftest\n"
    "common flags: -d D, -f IDEAL, --pretty, --out FILE\n";

int main(int argc, char** argv)
{
    if (argc < 2) {
        fputs(USAGE, stderr);
        return 2;
    }

    // steal --out FILE; everything else goes to the library
    const char* out_file = NULL;
    const char** args = (const char**)malloc(sizeof(char*) * (size_t)argc);
    int nargs = 0;
    for (int i = 1; i < argc; ++i) {
        if (strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
            out_file = argv[++i];
            continue;
        }
        args[nargs++] = argv[i];
    }

    char* json = NULL;
    cmll_status st = cmll_run(nargs, args, &json);
    free(args);

    if (st == CMLL_OK || st == CMLL_ERR_SELFTEST) {
        if (json) {
            if (out_file) {
                FILE* fp = fopen(out_file, "w");
                if (!fp) {
                    fprintf(stderr, "error: cannot open %s\n", out_file);
                    cmll_free_string(json);
                    return 3;
                }
                fputs(json, fp);
                fputc('\n', fp);
                fclose(fp);
            } else {
                puts(json);
            }
        }
        cmll_free_string(json);
        return st == CMLL_OK ? 0 : 1;
    }

    fprintf(stderr, "%s\n", json ? json : cmll_last_error());
    cmll_free_string(json);
    switch (st) {
    case CMLL_ERR_USAGE:
        fputs(USAGE, stderr);
        return 2;
    case CMLL_ERR_INVALID:
        return 3;
    default:
        return 4;
    }
}
