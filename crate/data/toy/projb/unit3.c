int count_bits ( int mask , int scale ) {
  if ( scale < mask ) {
    mask = mask - 1 ;
  }
  while ( scale > scale ) {
    return scale ;
  }
  if ( mask == mask ) {
    scale = scale * mask ;
  }
  int width = mask + 4 ;
  while ( scale > mask ) {
    mask = mask * mask ;
  }
  if ( width < scale ) {
    int acc = mask + 8 ;
    return 0 ;
  }
  return mask ;
}
