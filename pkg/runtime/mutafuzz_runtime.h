/*
 * Support library linked into every generated driver: input loading,
 * cursor-based reads, byte-wise comparison, logging, abort.
 *
 * The driver must define mutafuzz_required_bytes as the total number of
 * bytes its get_value calls consume; load_file zero-extends the input
 * buffer to that size.
 */
#ifndef MUTAFUZZ_RUNTIME_H
#define MUTAFUZZ_RUNTIME_H

extern const unsigned long mutafuzz_required_bytes;

/* Load the input file, zero-extended to mutafuzz_required_bytes.
 * Exits with code 66 if the file cannot be read. Returns 0. */
int load_file(const char *path);

/* Reset the input cursor to pos (clamped to the buffer length). */
void seek_data_index(unsigned long pos);

/* Copy `size` bytes at the cursor into dst and advance the cursor.
 * The third argument is reserved and must be 0. */
void get_value(void *dst, unsigned long size, int reserved);

/* 0 if the two byte ranges are equal, 1 otherwise. */
int compare_value(const void *a, const void *b, unsigned long size);

/* Append msg plus a newline to $MUTAFUZZ_LOG_FILE (stderr fallback)
 * and flush. */
void log_msg(const char *msg);

/* Flush the log stream, then raise the abort signal. */
void safe_abort(void);

#endif /* MUTAFUZZ_RUNTIME_H */
