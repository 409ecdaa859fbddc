"""Intersection rings of V and its dual, and the isogeny between them."""
from abelfm.isogeny import compose, phi_pullback, phi_pushforward
from abelfm.ring import builtin_model, format_class, intersect

V = builtin_model("V")
W = builtin_model("Vdual")

# Products in V.  H is the polarization, A a fiber, e the section curve, l a line in a fiber.
H, A = V.cls("H"), V.cls("A")
print("H^2      =", format_class(H * H))
print("H.A      =", format_class(H * A))
print("H^3, H^2A:", intersect(H, H, H), intersect(H, H, A))

# The dual side has H^3 = 128 because its fibers carry the dual (8,1) polarization.
Hd = W.cls("H^")
print("H^^3     =", intersect(Hd, Hd, Hd))

# Classes parse from text and print back in the same canonical form.
x = V.parse("2[H] - 1/3[pt] + [e]")
print("parsed   :", format_class(x))

# Pull back then push forward multiplies by the degree of the isogeny.
pull, push = phi_pullback(), phi_pushforward()
print("pull(H^) =", format_class(pull(Hd)))
print("push(l)  =", format_class(push(V.cls("l"))))
print("push . pull on H^ :", format_class(compose(push, pull)(Hd)))
