"""Stream library loaded at interpreter startup, written in the surface
language itself so it exercises deflazy/lazy-call instead of bypassing them.

A lazy pair is a one-argument selector closure; its captured head/tail are
lazy parameter slots, so an element is only computed when a selector call
reads it. head/tail on nil-or-wrong values fail inside ecase/funcall.
"""

PRELUDE_SOURCE = """
(deflazy conc (head tail)
  (lambda (selector)
    (ecase selector
      (car head)
      (cdr tail))))

(deflazy head (cons) (funcall cons 'car))

(deflazy tail (cons) (funcall cons 'cdr))

(defun integers-from (n)
  (lazy-call 'conc n (integers-from (1+ n))))

(defun stream-take (s n)
  (if (= n 0)
      nil
      (cons (head s) (stream-take (tail s) (- n 1)))))
"""
