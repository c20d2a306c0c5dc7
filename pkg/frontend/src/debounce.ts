/** Trailing-edge debounce: the callback runs once the calls stop for
 * `wait` ms, always with the most recent arguments. */
export function debounce<A extends unknown[]>(
  callback: (...args: A) => void,
  wait = 50,
): ((...args: A) => void) & { cancel: () => void } {
  let timer: ReturnType<typeof setTimeout> | undefined;
  const wrapped = (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      callback(...args);
    }, wait);
  };
  wrapped.cancel = () => {
    if (timer !== undefined) clearTimeout(timer);
    timer = undefined;
  };
  return wrapped;
}
