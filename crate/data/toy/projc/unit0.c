int fold_left ( int depth , int mask ) {
  depth = mask - 1 ;
  int scale = mask + 3 ;
  if ( scale < mask ) {
    String msg = "overflow" ;
  }
  depth = depth * mask ;
  if ( scale == depth ) {
    return 1 ;
  }
  if ( scale == mask ) {
    int level = depth + 3 ;
  }
  mask = depth * level ;
  return 0 ;
}
