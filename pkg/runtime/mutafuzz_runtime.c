/* Driver support runtime. C89, single translation unit. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "mutafuzz_runtime.h"

static unsigned char *mf_data = NULL;
static unsigned long mf_length = 0;
static unsigned long mf_cursor = 0;
static FILE *mf_log = NULL;

static FILE *mf_log_stream(void)
{
    const char *path;
    if (mf_log != NULL) {
        return mf_log;
    }
    path = getenv("MUTAFUZZ_LOG_FILE");
    if (path != NULL) {
        mf_log = fopen(path, "a");
    }
    if (mf_log == NULL) {
        mf_log = stderr;
    }
    return mf_log;
}

void log_msg(const char *msg)
{
    FILE *fh = mf_log_stream();
    fputs(msg, fh);
    fputc('\n', fh);
    fflush(fh);
}

void safe_abort(void)
{
    fflush(mf_log_stream());
    abort();
}

int load_file(const char *path)
{
    FILE *fh;
    unsigned long want;
    size_t got;

    want = mutafuzz_required_bytes;
    mf_data = (unsigned char *) calloc(want > 0 ? want : 1, 1);
    if (mf_data == NULL) {
        log_msg("out of memory");
        exit(66);
    }
    fh = fopen(path, "rb");
    if (fh == NULL) {
        log_msg("cannot read input file");
        exit(66);
    }
    got = fread(mf_data, 1, (size_t) want, fh);
    (void) got; /* short files stay zero-extended; long files truncate */
    fclose(fh);
    mf_length = want;
    mf_cursor = 0;
    return 0;
}

void seek_data_index(unsigned long pos)
{
    if (pos > mf_length) {
        pos = mf_length;
    }
    mf_cursor = pos;
}

void get_value(void *dst, unsigned long size, int reserved)
{
    if (reserved != 0) {
        log_msg("reserved arg");
        safe_abort();
    }
    if (mf_cursor + size > mf_length) {
        log_msg("input buffer overrun");
        safe_abort();
    }
    memcpy(dst, mf_data + mf_cursor, (size_t) size);
    mf_cursor += size;
}

int compare_value(const void *a, const void *b, unsigned long size)
{
    return memcmp(a, b, (size_t) size) != 0 ? 1 : 0;
}
